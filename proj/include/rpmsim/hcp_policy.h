#pragma once

#include <optional>
#include <span>
#include <string>

#include "rpmsim/cohort.h"

namespace rpm {

/// Round-robin by alert sequence number over the HCPs on duty that
/// weekday (sorted by id). nullopt when nobody is on duty.
std::optional<HcpId> assign(const Alert& alert, std::span<const HcpProfile> hcps, Date date);

/// Whom a contact_colleague hands the alert to: the next on-duty HCP after
/// `current`, else the next HCP in the whole roster.
std::optional<HcpId> successor(const HcpId& current, std::span<const HcpProfile> hcps, Date date);

/// Smallest k >= 1 such that some HCP is on duty at date + k (8 if nobody ever is).
int days_until_next_duty(std::span<const HcpProfile> hcps, Date date);

struct DecisionContext {
    Alert alert;
    int repeat_count = 1;  // alerts on the same patient+vital in the past 7 days, this one included
    Weekday weekday = Weekday::monday;
    int days_until_next_duty = 1;
    StabilityClass stability_class = StabilityClass::stable;
    HcpProfile hcp;
};

/// Fixed-priority decision table; first matching rule wins.
Action decide(const DecisionContext& ctx);

struct NoteEvent {
    Action action = Action::dismiss;
    std::string patient_name;
    std::optional<Vital> vital;
    double value = 0;
    std::set<AlertRule> rules;
    Severity severity = Severity::mild;
};

std::string render_note(const HcpProfile& hcp, const NoteEvent& event);
std::string render_consultation(const HcpProfile& hcp, const NoteEvent& event, Channel channel);

struct MedicationRule {
    std::string drug;
    ChangeKind change;
    MedicationEffect effect;
};

/// Drug and effect prescribed against a deviation of `vital` in `deviation`.
MedicationRule medication_for(Vital vital, Direction deviation);

/// Direction the measurement behind `alert` deviates in: from the
/// threshold rule when present, else relative to the patient's baseline.
Direction deviation_of(const Alert& alert, const Measurement& m, const PatientProfile& profile);

struct ResponseOptions {
    /// Free-text note; rendered from the HCP's documentation style when empty.
    std::string note;
    /// When false an adjust_medication response records no MedicationChange.
    bool record_medication = true;
};

/// Records a response and its side effects in place. Throws NotFoundError
/// for unknown ids and ConflictError if the alert is already resolved.
AlertResponse apply_response(Cohort& cohort, const AlertId& alert_id, const HcpId& hcp_id, Action action,
                             DateTime when, const ResponseOptions& options = {});

} // namespace rpm
