#pragma once

#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "rpmsim/cohort.h"

namespace rpm {

struct AlertRuleParams {
    PerVital<double> abrupt_delta;
    int abrupt_window_days = 3;
    PerVital<double> escalation_margin;
};

AlertRuleParams rule_params(const SimulationConfig& config);

/// Median of the trailing window used by the abrupt-change rule: the
/// earliest measurement of each calendar day in [day - window, day - 1].
/// `history` must be chronological; nullopt when the window is empty.
std::optional<double> trailing_median(const Measurement& m, std::span<const Measurement> history, int window_days);

/// Applies the threshold and abrupt-change rules to one measurement.
/// Returns an open, unassigned alert with an empty id, or nothing.
std::optional<Alert> evaluate(const Measurement& m, const PatientProfile& profile,
                              std::span<const Measurement> history, const AlertRuleParams& params);

/// Independent rescan of a measurement stream. Rows whose id is in
/// `exclude` are skipped entirely. Alert ids are assigned in stream order.
std::vector<Alert> scan(std::span<const Measurement> measurements, std::span<const PatientProfile> profiles,
                        const AlertRuleParams& params, const std::set<MeasurementId>& exclude = {});

/// The identity of an alert for set comparisons.
struct AlertKey {
    PatientId patient_id;
    MeasurementId measurement_id;
    std::set<AlertRule> rules;

    auto operator<=>(const AlertKey& o) const {
        return std::tie(patient_id, measurement_id, rules) <=> std::tie(o.patient_id, o.measurement_id, o.rules);
    }
    bool operator==(const AlertKey&) const = default;
};

std::set<AlertKey> alert_keys(std::span<const Alert> alerts);

} // namespace rpm
