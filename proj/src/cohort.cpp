#include "rpmsim/cohort.h"

#include <algorithm>
#include <tuple>

namespace rpm {

namespace {

template <class T>
void sort_by_time(std::vector<T>& items) {
    std::stable_sort(items.begin(), items.end(),
                     [](const T& a, const T& b) { return std::tie(a.timestamp, a.id) < std::tie(b.timestamp, b.id); });
}

} // namespace

void canonicalize(Cohort& cohort) {
    std::stable_sort(cohort.patients.begin(), cohort.patients.end(),
                     [](const auto& a, const auto& b) { return a.id < b.id; });
    std::stable_sort(cohort.hcps.begin(), cohort.hcps.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    sort_by_time(cohort.measurements);
    std::stable_sort(cohort.alerts.begin(), cohort.alerts.end(), [](const Alert& a, const Alert& b) {
        return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id);
    });
    sort_by_time(cohort.responses);
    sort_by_time(cohort.medication_changes);
    std::stable_sort(cohort.admissions.begin(), cohort.admissions.end(), [](const Admission& a, const Admission& b) {
        return std::tie(a.start, a.id) < std::tie(b.start, b.id);
    });
    sort_by_time(cohort.consultations);
    std::stable_sort(cohort.truth_ledger.begin(), cohort.truth_ledger.end(),
                     [](const TruthLedgerEntry& a, const TruthLedgerEntry& b) { return a.injected_id < b.injected_id; });
}

bool is_complete(const Cohort& cohort) { return cohort.clock_day >= cohort.config.duration_days; }

std::size_t open_alert_count(const Cohort& cohort) {
    return static_cast<std::size_t>(std::count_if(cohort.alerts.begin(), cohort.alerts.end(),
                                                  [](const Alert& a) { return a.status == AlertStatus::open; }));
}

const PatientProfile* find_patient(const Cohort& cohort, const PatientId& id) {
    auto it = std::find_if(cohort.patients.begin(), cohort.patients.end(), [&](const auto& p) { return p.id == id; });
    return it == cohort.patients.end() ? nullptr : &*it;
}

const HcpProfile* find_hcp(const Cohort& cohort, const HcpId& id) {
    auto it = std::find_if(cohort.hcps.begin(), cohort.hcps.end(), [&](const auto& h) { return h.id == id; });
    return it == cohort.hcps.end() ? nullptr : &*it;
}

// Lookups scan from the back: callers almost always want recent events.
const Measurement* find_measurement(const Cohort& cohort, const MeasurementId& id) {
    auto it = std::find_if(cohort.measurements.rbegin(), cohort.measurements.rend(),
                           [&](const auto& m) { return m.id == id; });
    return it == cohort.measurements.rend() ? nullptr : &*it;
}

Alert* find_alert(Cohort& cohort, const AlertId& id) {
    auto it = std::find_if(cohort.alerts.rbegin(), cohort.alerts.rend(), [&](const auto& a) { return a.id == id; });
    return it == cohort.alerts.rend() ? nullptr : &*it;
}

const Alert* find_alert(const Cohort& cohort, const AlertId& id) {
    return find_alert(const_cast<Cohort&>(cohort), id);
}

std::set<MeasurementId> injected_duplicate_ids(const Cohort& cohort) {
    std::set<MeasurementId> ids;
    for (const auto& e : cohort.truth_ledger)
        if (e.kind == LedgerKind::injected_duplicate) ids.insert(e.injected_id);
    return ids;
}

} // namespace rpm
