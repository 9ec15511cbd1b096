#include "rpmsim/service.h"

#include <algorithm>
#include <mutex>

#include <fmt/format.h>

#include "rpmsim/dataset_io.h"
#include "rpmsim/hcp_policy.h"
#include "rpmsim/messiness.h"
#include "rpmsim/stats.h"
#include "rpmsim/timeline.h"

namespace rpm {

using nlohmann::json;

namespace {

json opt(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

json to_json(const Measurement& m) {
    return {{"id", m.id.value},
            {"patient_id", m.patient_id.value},
            {"timestamp", format_datetime(m.timestamp)},
            {"vital", std::string(to_string(m.vital))},
            {"value", m.value},
            {"unit", std::string(unit_of(m.vital))},
            {"comment", opt(m.comment)}};
}

json to_json(const Alert& a) {
    json rules = json::array();
    for (auto r : a.rules) rules.push_back(std::string(to_string(r)));
    return {{"id", a.id.value},
            {"patient_id", a.patient_id.value},
            {"measurement_id", a.measurement_id.value},
            {"rules", rules},
            {"severity", std::string(to_string(a.severity))},
            {"created_at", format_datetime(a.created_at)},
            {"status", std::string(to_string(a.status))},
            {"assigned_hcp_id", a.assigned_hcp_id ? json(a.assigned_hcp_id->value) : json(nullptr)}};
}

json to_json(const AlertResponse& r) {
    return {{"id", r.id.value},     {"alert_id", r.alert_id.value}, {"hcp_id", r.hcp_id.value},
            {"action", std::string(to_string(r.action))}, {"note", r.note}, {"timestamp", format_datetime(r.timestamp)}};
}

json to_json(const MedicationChange& mc) {
    return {{"id", mc.id.value},
            {"patient_id", mc.patient_id.value},
            {"drug", mc.drug},
            {"change", std::string(to_string(mc.change))},
            {"timestamp", format_datetime(mc.timestamp)},
            {"effect",
             {{"vital", std::string(to_string(mc.effect.vital))},
              {"direction", std::string(to_string(mc.effect.direction))},
              {"magnitude", mc.effect.magnitude},
              {"onset_days", mc.effect.onset_days}}}};
}

json to_json(const Admission& ad) {
    return {{"id", ad.id.value},
            {"patient_id", ad.patient_id.value},
            {"start", format_date(ad.start)},
            {"end", format_date(ad.end)},
            {"reason", ad.reason}};
}

json to_json(const Consultation& c) {
    return {{"id", c.id.value},
            {"patient_id", c.patient_id.value},
            {"hcp_id", c.hcp_id.value},
            {"timestamp", format_datetime(c.timestamp)},
            {"channel", std::string(to_string(c.channel))},
            {"text", c.text}};
}

json to_json(const PatientProfile& p) {
    json baselines = json::object();
    json thresholds = json::object();
    for (auto v : kAllVitals) {
        baselines[std::string(to_string(v))] = p.baselines[v];
        thresholds[std::string(to_string(v))] = {{"low", p.thresholds[v].low}, {"high", p.thresholds[v].high}};
    }
    return {{"id", p.id.value},
            {"display_name", p.display_name},
            {"age", p.age},
            {"comorbidities", p.comorbidities},
            {"stability_class", std::string(to_string(p.stability_class))},
            {"adherence", p.adherence},
            {"home_support", std::string(to_string(p.home_support))},
            {"enrollment_date", format_date(p.enrollment_date)},
            {"baselines", baselines},
            {"thresholds", thresholds}};
}

} // namespace

json to_json(const CohortHandle& h) {
    return {{"cohort_id", h.cohort_id},
            {"mode", std::string(to_string(h.mode))},
            {"clock_day", h.clock_day},
            {"complete", h.complete},
            {"open_alert_count", h.open_alert_count}};
}

json to_json(const DayReport& r) {
    return {{"days_run", r.days_run},   {"new_measurements", r.new_measurements}, {"new_alerts", r.new_alerts},
            {"halted", r.halted},       {"complete", r.complete},                 {"clock_day", r.clock_day}};
}

CohortHandle CohortService::create_cohort(const json& config_overrides) {
    return create_cohort(config_from_json(config_overrides));
}

CohortHandle CohortService::create_cohort(const SimulationConfig& config) { return add_cohort(simulate(config)); }

CohortHandle CohortService::add_cohort(Cohort cohort) {
    auto entry = std::make_shared<Entry>();
    entry->cohort = std::move(cohort);
    std::unique_lock lock(store_mutex_);
    std::string id = fmt::format("c{}", next_id_++);
    cohorts_.emplace(id, entry);
    return make_handle(id, entry->cohort);
}

std::shared_ptr<CohortService::Entry> CohortService::find(const std::string& cohort_id) const {
    std::shared_lock lock(store_mutex_);
    auto it = cohorts_.find(cohort_id);
    if (it == cohorts_.end()) throw NotFoundError("unknown cohort " + cohort_id);
    return it->second;
}

CohortHandle CohortService::make_handle(const std::string& id, const Cohort& cohort) const {
    return CohortHandle{id, cohort.config.mode, cohort.clock_day, is_complete(cohort), open_alert_count(cohort)};
}

CohortHandle CohortService::handle(const std::string& cohort_id) const {
    auto e = find(cohort_id);
    std::shared_lock lock(e->mutex);
    return make_handle(cohort_id, e->cohort);
}

DayReport CohortService::advance(const std::string& cohort_id, int days) {
    auto e = find(cohort_id);
    std::unique_lock lock(e->mutex);
    if (days < 1) throw ValidationError("invalid advance request", {"days: must be >= 1"});
    return rpm::advance(e->cohort, days);
}

json CohortService::list_alerts(const std::string& cohort_id, const std::string& status) const {
    std::optional<AlertStatus> filter;
    if (!status.empty()) {
        filter = try_parse_enum<AlertStatus>(status);
        if (!filter) throw ValidationError("invalid alert filter", {"status: expected open or resolved"});
    }
    auto e = find(cohort_id);
    std::shared_lock lock(e->mutex);
    const Cohort& c = e->cohort;
    json out = json::array();
    for (const auto& a : c.alerts) {  // canonical order is oldest first
        if (filter && a.status != *filter) continue;
        json item = to_json(a);
        if (const auto* p = find_patient(c, a.patient_id))
            item["patient"] = {{"id", p->id.value},
                               {"display_name", p->display_name},
                               {"stability_class", std::string(to_string(p->stability_class))}};
        if (const auto* m = find_measurement(c, a.measurement_id)) {
            item["measurement"] = to_json(*m);
            if (const auto* p = find_patient(c, a.patient_id))
                item["measurement"]["thresholds"] = {{"low", p->thresholds[m->vital].low},
                                                     {"high", p->thresholds[m->vital].high}};
        }
        out.push_back(std::move(item));
    }
    return out;
}

json CohortService::submit_response(const std::string& cohort_id, const std::string& alert_id,
                                    const std::string& hcp_id, const std::string& action, const std::string& note) {
    auto parsed = try_parse_enum<Action>(action);
    if (!parsed)
        throw ValidationError("invalid response",
                              {"action: expected call_patient, adjust_medication, contact_colleague or dismiss"});
    auto e = find(cohort_id);
    std::unique_lock lock(e->mutex);
    Cohort& c = e->cohort;
    ResponseOptions options;
    options.note = note;
    auto response = apply_response(c, AlertId(alert_id), HcpId(hcp_id), *parsed, interactive_response_time(c), options);
    canonicalize(c);
    json out = to_json(response);
    out["alert"] = to_json(*find_alert(c, response.alert_id));
    return out;
}

json CohortService::patients(const std::string& cohort_id) const {
    auto e = find(cohort_id);
    std::shared_lock lock(e->mutex);
    json out = json::array();
    for (const auto& p : e->cohort.patients) {
        json row = to_json(p);
        row["summary"] = to_json(summarize_patient(e->cohort, p.id));
        out.push_back(std::move(row));
    }
    return out;
}

json CohortService::timeline(const std::string& cohort_id, const std::string& patient_id) const {
    auto e = find(cohort_id);
    std::shared_lock lock(e->mutex);
    json out = json::array();
    for (const auto& ev : patient_timeline(e->cohort, PatientId(patient_id))) {
        json data = std::visit([](const auto& payload) { return to_json(payload); }, ev.payload);
        out.push_back({{"kind", std::string(to_string(ev.kind))},
                       {"id", ev.id},
                       {"timestamp", format_datetime(ev.timestamp)},
                       {"links", ev.links},
                       {"data", std::move(data)}});
    }
    return out;
}

json CohortService::summary(const std::string& cohort_id, const std::string& patient_id) const {
    auto e = find(cohort_id);
    std::shared_lock lock(e->mutex);
    return to_json(summarize_patient(e->cohort, PatientId(patient_id)));
}

json CohortService::stats(const std::string& cohort_id) const {
    auto e = find(cohort_id);
    std::shared_lock lock(e->mutex);
    return to_json(compute_stats(e->cohort));
}

std::string CohortService::export_archive(const std::string& cohort_id) const {
    Cohort c = snapshot(cohort_id);
    // Cohorts loaded from a bundle already carry their injections.
    if (c.truth_ledger.empty()) c = inject_messiness(c);
    return tar_archive(render_bundle(c), "cohort-" + cohort_id);
}

Cohort CohortService::snapshot(const std::string& cohort_id) const {
    auto e = find(cohort_id);
    std::shared_lock lock(e->mutex);
    return e->cohort;
}

} // namespace rpm
