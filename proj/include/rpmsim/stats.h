#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "rpmsim/cohort.h"

namespace rpm {

/// Cohort statistics over the truth stream: measurements injected as
/// duplicates are not counted.
struct CohortStats {
    std::size_t measurement_count = 0;
    std::size_t alert_count = 0;
    std::size_t response_count = 0;
    double alert_rate = 0;
    std::map<std::string, std::size_t> responses_per_hcp;
    std::map<std::string, std::size_t> alerts_per_patient;
    std::map<std::string, int> admission_days_per_patient;
};

CohortStats compute_stats(const Cohort& cohort);
nlohmann::json to_json(const CohortStats& stats);
std::string render_table(const CohortStats& stats);

enum class Trend { up, down, flat };
template <>
struct EnumNames<Trend> {
    static constexpr auto names = std::to_array<std::string_view>({"up", "down", "flat"});
};

struct VitalSummary {
    std::optional<double> latest;
    std::optional<Trend> trend_7d;
};

struct PatientSummary {
    PatientId patient_id;
    PerVital<VitalSummary> vitals;
    std::size_t open_alerts = 0;
    std::size_t admissions = 0;
    std::size_t medication_changes = 0;
    std::optional<Date> last_contact;
    std::optional<Channel> last_contact_channel;
};

/// Latest value and trend over the 7 days ending at the latest measurement.
/// The trend is flat when the change is below half the abrupt delta.
PatientSummary summarize_patient(const Cohort& cohort, const PatientId& id);
nlohmann::json to_json(const PatientSummary& summary);

} // namespace rpm
