#include "rpmsim/alert_engine.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace rpm {

AlertRuleParams rule_params(const SimulationConfig& config) {
    return AlertRuleParams{config.abrupt_delta, config.abrupt_window_days, config.escalation_margin};
}

std::optional<double> trailing_median(const Measurement& m, std::span<const Measurement> history, int window_days) {
    const Date today = date_of(m.timestamp);
    const Date first = today - std::chrono::days(window_days);
    // One value per calendar day: the earliest, so a same-day duplicate
    // can never displace the original reading.
    std::map<Date, std::pair<DateTime, double>> per_day;
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        Date d = date_of(it->timestamp);
        if (d < first) break;
        if (d >= today) continue;
        auto [slot, inserted] = per_day.try_emplace(d, it->timestamp, it->value);
        if (!inserted && it->timestamp <= slot->second.first) slot->second = {it->timestamp, it->value};
    }
    if (per_day.empty()) return std::nullopt;
    std::vector<double> values;
    for (const auto& [d, v] : per_day) values.push_back(v.second);
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

std::optional<Alert> evaluate(const Measurement& m, const PatientProfile& profile,
                              std::span<const Measurement> history, const AlertRuleParams& params) {
    const Range& limits = profile.thresholds[m.vital];
    Alert alert;
    bool high_severity = false;

    if (m.value > limits.high) {
        alert.rules.insert(AlertRule::threshold_high);
        high_severity |= m.value - limits.high >= params.escalation_margin[m.vital];
    }
    if (m.value < limits.low) {
        alert.rules.insert(AlertRule::threshold_low);
        high_severity |= limits.low - m.value >= params.escalation_margin[m.vital];
    }
    if (auto median = trailing_median(m, history, params.abrupt_window_days)) {
        double deviation = std::abs(m.value - *median);
        if (deviation > params.abrupt_delta[m.vital]) {
            alert.rules.insert(AlertRule::abrupt_change);
            high_severity |= deviation >= 2.0 * params.abrupt_delta[m.vital];
        }
    }
    if (alert.rules.empty()) return std::nullopt;

    alert.patient_id = m.patient_id;
    alert.measurement_id = m.id;
    alert.severity = high_severity ? Severity::high : Severity::mild;
    alert.created_at = m.timestamp;
    return alert;
}

std::vector<Alert> scan(std::span<const Measurement> measurements, std::span<const PatientProfile> profiles,
                        const AlertRuleParams& params, const std::set<MeasurementId>& exclude) {
    std::unordered_map<PatientId, const PatientProfile*> by_id;
    for (const auto& p : profiles) by_id.emplace(p.id, &p);

    std::vector<const Measurement*> sorted;
    for (const auto& m : measurements)
        if (!exclude.contains(m.id)) sorted.push_back(&m);
    std::sort(sorted.begin(), sorted.end(), [](const Measurement* a, const Measurement* b) {
        return std::tie(a->timestamp, a->id) < std::tie(b->timestamp, b->id);
    });

    std::map<std::pair<PatientId, Vital>, std::vector<Measurement>> series;
    std::vector<Alert> alerts;
    for (const Measurement* m : sorted) {
        auto& history = series[{m->patient_id, m->vital}];
        if (auto p = by_id.find(m->patient_id); p != by_id.end()) {
            if (auto alert = evaluate(*m, *p->second, history, params)) {
                alert->id = AlertId::make(alerts.size() + 1);
                alerts.push_back(std::move(*alert));
            }
        }
        history.push_back(*m);
    }
    return alerts;
}

std::set<AlertKey> alert_keys(std::span<const Alert> alerts) {
    std::set<AlertKey> keys;
    for (const auto& a : alerts) keys.insert(AlertKey{a.patient_id, a.measurement_id, a.rules});
    return keys;
}

} // namespace rpm
