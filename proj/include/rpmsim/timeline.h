#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rpmsim/cohort.h"

namespace rpm {

// Declaration order is the tie-break order for events sharing a timestamp.
enum class EventKind { measurement, alert, response, medication_change, consultation, admission };
template <>
struct EnumNames<EventKind> {
    static constexpr auto names = std::to_array<std::string_view>(
        {"measurement", "alert", "response", "medication_change", "consultation", "admission"});
};

struct TimelineEvent {
    EventKind kind;
    DateTime timestamp;
    std::string id;
    std::variant<Measurement, Alert, AlertResponse, MedicationChange, Consultation, Admission> payload;
    /// Alerts: source measurement id then response ids. Responses: alert id.
    std::vector<std::string> links;
};

/// All events of one patient, ordered by timestamp, then kind, then id.
/// Admissions are placed at midnight of their start date.
std::vector<TimelineEvent> patient_timeline(const Cohort& cohort, const PatientId& patient_id);

} // namespace rpm
