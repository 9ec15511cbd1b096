#include "rpmsim/stats.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace rpm {

using nlohmann::json;

CohortStats compute_stats(const Cohort& cohort) {
    CohortStats s;
    auto injected = injected_duplicate_ids(cohort);
    for (const auto& p : cohort.patients) {
        s.alerts_per_patient[p.id.value] = 0;
        s.admission_days_per_patient[p.id.value] = 0;
    }
    for (const auto& h : cohort.hcps) s.responses_per_hcp[h.id.value] = 0;
    for (const auto& m : cohort.measurements)
        if (!injected.contains(m.id)) ++s.measurement_count;
    s.alert_count = cohort.alerts.size();
    for (const auto& a : cohort.alerts) ++s.alerts_per_patient[a.patient_id.value];
    s.response_count = cohort.responses.size();
    for (const auto& r : cohort.responses) ++s.responses_per_hcp[r.hcp_id.value];
    for (const auto& ad : cohort.admissions) s.admission_days_per_patient[ad.patient_id.value] += days_between(ad.start, ad.end);
    s.alert_rate = s.measurement_count ? static_cast<double>(s.alert_count) / s.measurement_count : 0.0;
    return s;
}

json to_json(const CohortStats& s) {
    return {{"measurement_count", s.measurement_count},
            {"alert_count", s.alert_count},
            {"response_count", s.response_count},
            {"alert_rate", s.alert_rate},
            {"responses_per_hcp", s.responses_per_hcp},
            {"alerts_per_patient", s.alerts_per_patient},
            {"admission_days_per_patient", s.admission_days_per_patient}};
}

std::string render_table(const CohortStats& s) {
    std::string out;
    out += fmt::format("measurements  {}\n", s.measurement_count);
    out += fmt::format("alerts        {}\n", s.alert_count);
    out += fmt::format("responses     {}\n", s.response_count);
    out += fmt::format("alert_rate    {:.4f}\n", s.alert_rate);
    out += "\nhcp       responses\n";
    for (const auto& [id, n] : s.responses_per_hcp) out += fmt::format("{:<9} {}\n", id, n);
    out += "\npatient   alerts  admission_days\n";
    for (const auto& [id, n] : s.alerts_per_patient)
        out += fmt::format("{:<9} {:<7} {}\n", id, n, s.admission_days_per_patient.at(id));
    return out;
}

PatientSummary summarize_patient(const Cohort& cohort, const PatientId& id) {
    if (!find_patient(cohort, id)) throw NotFoundError("unknown patient " + id.value);
    PatientSummary s;
    s.patient_id = id;
    auto injected = injected_duplicate_ids(cohort);

    for (auto v : kAllVitals) {
        std::vector<const Measurement*> series;
        for (const auto& m : cohort.measurements)
            if (m.patient_id == id && m.vital == v && !injected.contains(m.id)) series.push_back(&m);
        if (series.empty()) continue;
        const Measurement& last = *series.back();
        s.vitals[v].latest = last.value;
        Date from = date_of(last.timestamp) - std::chrono::days(6);
        auto first = std::find_if(series.begin(), series.end(), [&](auto* m) { return date_of(m->timestamp) >= from; });
        if (series.end() - first >= 2) {
            double diff = last.value - (*first)->value;
            double band = 0.5 * cohort.config.abrupt_delta[v];
            s.vitals[v].trend_7d = std::abs(diff) < band ? Trend::flat : diff > 0 ? Trend::up : Trend::down;
        }
    }
    for (const auto& a : cohort.alerts)
        if (a.patient_id == id && a.status == AlertStatus::open) ++s.open_alerts;
    for (const auto& ad : cohort.admissions)
        if (ad.patient_id == id) ++s.admissions;
    for (const auto& mc : cohort.medication_changes)
        if (mc.patient_id == id) ++s.medication_changes;
    for (const auto& c : cohort.consultations) {
        if (c.patient_id != id) continue;
        s.last_contact = date_of(c.timestamp);
        s.last_contact_channel = c.channel;
    }
    return s;
}

json to_json(const PatientSummary& s) {
    json vitals = json::object();
    for (auto v : kAllVitals) {
        const auto& vs = s.vitals[v];
        vitals[std::string(to_string(v))] = {
            {"latest", vs.latest ? json(*vs.latest) : json(nullptr)},
            {"unit", std::string(unit_of(v))},
            {"trend_7d", vs.trend_7d ? json(std::string(to_string(*vs.trend_7d))) : json(nullptr)}};
    }
    return {{"patient_id", s.patient_id.value},
            {"vitals", vitals},
            {"open_alerts", s.open_alerts},
            {"admissions", s.admissions},
            {"medication_changes", s.medication_changes},
            {"last_contact", s.last_contact ? json(format_date(*s.last_contact)) : json(nullptr)},
            {"last_contact_channel",
             s.last_contact_channel ? json(std::string(to_string(*s.last_contact_channel))) : json(nullptr)}};
}

} // namespace rpm
