#include "rpmsim/validation.h"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

namespace rpm {

std::string describe(const Violation& v) {
    std::string ids;
    for (const auto& id : v.ids) ids += (ids.empty() ? "" : ",") + id;
    return fmt::format("{} [{} {}]: {}", to_string(v.kind), to_string(v.entity), ids, v.message);
}

std::size_t ValidationReport::count(ViolationKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; }));
}

std::vector<std::string> ValidationReport::lines() const {
    std::vector<std::string> out;
    for (const auto& v : violations) out.push_back(describe(v));
    return out;
}

namespace {

class Checker {
public:
    explicit Checker(const Cohort& c) : c_(c) {}

    ValidationReport run() {
        index();
        check_patients();
        check_hcps();
        check_measurements();
        check_alerts();
        check_responses();
        check_medication_changes();
        check_admissions();
        check_consultations();
        std::stable_sort(report_.violations.begin(), report_.violations.end(), [](const auto& a, const auto& b) {
            if (a.entity != b.entity) return a.entity < b.entity;
            return less_id(a.ids.front(), b.ids.front());
        });
        return std::move(report_);
    }

private:
    static bool less_id(const std::string& a, const std::string& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    }

    void add(ViolationKind kind, EntityKind entity, std::vector<std::string> ids, std::string message) {
        report_.violations.push_back(Violation{kind, entity, std::move(ids), std::move(message)});
    }

    template <class T>
    void unique_ids(const std::vector<T>& items, EntityKind entity) {
        std::unordered_set<std::string> seen;
        for (const auto& item : items)
            if (!seen.insert(item.id.value).second)
                add(ViolationKind::duplicate_id, entity, {item.id.value}, "id occurs more than once");
    }

    void index() {
        for (const auto& p : c_.patients) patients_.emplace(p.id.value, &p);
        for (const auto& h : c_.hcps) hcps_.emplace(h.id.value, &h);
        for (const auto& m : c_.measurements) measurements_.emplace(m.id.value, &m);
        for (const auto& a : c_.alerts) alerts_.emplace(a.id.value, &a);
        for (const auto& ad : c_.admissions) admissions_[ad.patient_id.value].push_back(&ad);
    }

    bool admitted(const PatientId& patient, Date d) const {
        auto it = admissions_.find(patient.value);
        if (it == admissions_.end()) return false;
        return std::any_of(it->second.begin(), it->second.end(), [&](const Admission* a) { return a->covers(d); });
    }

    void check_patients() {
        unique_ids(c_.patients, EntityKind::patient);
        for (const auto& p : c_.patients) {
            for (auto v : kAllVitals) {
                const auto& t = p.thresholds[v];
                if (!(t.low < t.high))
                    add(ViolationKind::invariant, EntityKind::patient, {p.id.value},
                        fmt::format("{} threshold low must be below high", to_string(v)));
                else if (!(t.low < p.baselines[v] && p.baselines[v] < t.high))
                    add(ViolationKind::invariant, EntityKind::patient, {p.id.value},
                        fmt::format("{} baseline outside its thresholds", to_string(v)));
            }
            if (!(p.adherence >= 0 && p.adherence <= 1))
                add(ViolationKind::invariant, EntityKind::patient, {p.id.value}, "adherence outside [0, 1]");
            if (p.age < 18 || p.age > 110)
                add(ViolationKind::invariant, EntityKind::patient, {p.id.value}, "age outside [18, 110]");
        }
    }

    void check_hcps() {
        unique_ids(c_.hcps, EntityKind::hcp);
        for (const auto& h : c_.hcps) {
            if (!(h.confidence >= 0 && h.confidence <= 1))
                add(ViolationKind::invariant, EntityKind::hcp, {h.id.value}, "confidence outside [0, 1]");
            if (h.duty_days.empty()) add(ViolationKind::invariant, EntityKind::hcp, {h.id.value}, "no duty days");
        }
    }

    void check_measurements() {
        unique_ids(c_.measurements, EntityKind::measurement);
        for (const auto& m : c_.measurements) {
            if (!(m.value > 0))
                add(ViolationKind::invariant, EntityKind::measurement, {m.id.value}, "value must be positive");
            auto p = patients_.find(m.patient_id.value);
            if (p == patients_.end()) {
                add(ViolationKind::dangling_reference, EntityKind::measurement, {m.id.value, m.patient_id.value},
                    "patient does not exist");
            } else if (m.timestamp < DateTime(p->second->enrollment_date)) {
                add(ViolationKind::causal_order, EntityKind::measurement, {m.id.value, m.patient_id.value},
                    "measurement precedes enrollment");
            }
        }
    }

    void check_alerts() {
        unique_ids(c_.alerts, EntityKind::alert);
        for (const auto& a : c_.alerts) {
            if (a.rules.empty()) add(ViolationKind::invariant, EntityKind::alert, {a.id.value}, "empty rule set");
            if (!patients_.contains(a.patient_id.value))
                add(ViolationKind::dangling_reference, EntityKind::alert, {a.id.value, a.patient_id.value},
                    "patient does not exist");
            auto m = measurements_.find(a.measurement_id.value);
            if (m == measurements_.end()) {
                add(ViolationKind::dangling_reference, EntityKind::alert, {a.id.value, a.measurement_id.value},
                    "measurement does not exist");
            } else {
                if (m->second->patient_id != a.patient_id)
                    add(ViolationKind::dangling_reference, EntityKind::alert, {a.id.value, a.measurement_id.value},
                        "measurement belongs to another patient");
                if (a.created_at < m->second->timestamp)
                    add(ViolationKind::causal_order, EntityKind::alert, {a.id.value, a.measurement_id.value},
                        "alert created before its measurement");
            }
            if (a.assigned_hcp_id && !hcps_.contains(a.assigned_hcp_id->value))
                add(ViolationKind::dangling_reference, EntityKind::alert, {a.id.value, a.assigned_hcp_id->value},
                    "assigned HCP does not exist");
        }
    }

    void check_responses() {
        unique_ids(c_.responses, EntityKind::response);
        std::map<std::string, int> terminal;
        for (const auto& r : c_.responses) {
            if (!hcps_.contains(r.hcp_id.value))
                add(ViolationKind::dangling_reference, EntityKind::response, {r.id.value, r.hcp_id.value},
                    "HCP does not exist");
            auto a = alerts_.find(r.alert_id.value);
            if (a == alerts_.end()) {
                add(ViolationKind::dangling_reference, EntityKind::response, {r.id.value, r.alert_id.value},
                    "alert does not exist");
                continue;
            }
            if (r.timestamp < a->second->created_at)
                add(ViolationKind::causal_order, EntityKind::response, {r.id.value, r.alert_id.value},
                    "response precedes its alert");
            if (is_terminal(r.action)) terminal[r.alert_id.value]++;
        }
        for (const auto& a : c_.alerts) {
            int n = terminal.contains(a.id.value) ? terminal[a.id.value] : 0;
            if (a.status == AlertStatus::resolved && n != 1)
                add(ViolationKind::response_state, EntityKind::alert, {a.id.value},
                    fmt::format("resolved alert has {} terminal responses, expected 1", n));
            if (a.status == AlertStatus::open && n != 0)
                add(ViolationKind::response_state, EntityKind::alert, {a.id.value},
                    "open alert already has a terminal response");
        }
    }

    void check_medication_changes() {
        unique_ids(c_.medication_changes, EntityKind::medication_change);
        for (const auto& mc : c_.medication_changes) {
            if (!patients_.contains(mc.patient_id.value))
                add(ViolationKind::dangling_reference, EntityKind::medication_change,
                    {mc.id.value, mc.patient_id.value}, "patient does not exist");
            if (!(mc.effect.magnitude > 0))
                add(ViolationKind::invariant, EntityKind::medication_change, {mc.id.value},
                    "effect magnitude must be positive");
            if (mc.effect.onset_days < 1)
                add(ViolationKind::invariant, EntityKind::medication_change, {mc.id.value},
                    "effect onset must be at least one day");
        }
    }

    void check_admissions() {
        unique_ids(c_.admissions, EntityKind::admission);
        for (const auto& ad : c_.admissions) {
            if (!patients_.contains(ad.patient_id.value))
                add(ViolationKind::dangling_reference, EntityKind::admission, {ad.id.value, ad.patient_id.value},
                    "patient does not exist");
            if (!(ad.start < ad.end))
                add(ViolationKind::invariant, EntityKind::admission, {ad.id.value}, "start must precede end");
        }
        for (const auto& [patient, stays] : admissions_) {
            auto sorted = stays;
            std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->start < b->start; });
            for (std::size_t i = 1; i < sorted.size(); ++i)
                if (sorted[i]->start < sorted[i - 1]->end)
                    add(ViolationKind::overlap, EntityKind::admission, {sorted[i]->id.value, sorted[i - 1]->id.value},
                        "admission overlaps an earlier stay of the same patient");
        }
    }

    void check_consultations() {
        unique_ids(c_.consultations, EntityKind::consultation);
        for (const auto& con : c_.consultations) {
            if (!patients_.contains(con.patient_id.value))
                add(ViolationKind::dangling_reference, EntityKind::consultation, {con.id.value, con.patient_id.value},
                    "patient does not exist");
            if (!hcps_.contains(con.hcp_id.value))
                add(ViolationKind::dangling_reference, EntityKind::consultation, {con.id.value, con.hcp_id.value},
                    "HCP does not exist");
            bool in_hospital = admitted(con.patient_id, date_of(con.timestamp));
            if (con.channel == Channel::in_person && !in_hospital)
                add(ViolationKind::channel, EntityKind::consultation, {con.id.value},
                    "in-person consultation outside an admission");
            if (con.channel == Channel::phone && in_hospital)
                add(ViolationKind::channel, EntityKind::consultation, {con.id.value},
                    "phone consultation during an admission");
        }
    }

    const Cohort& c_;
    ValidationReport report_;
    std::unordered_map<std::string, const PatientProfile*> patients_;
    std::unordered_map<std::string, const HcpProfile*> hcps_;
    std::unordered_map<std::string, const Measurement*> measurements_;
    std::unordered_map<std::string, const Alert*> alerts_;
    std::unordered_map<std::string, std::vector<const Admission*>> admissions_;
};

} // namespace

ValidationReport validate_cohort(const Cohort& cohort) { return Checker(cohort).run(); }

} // namespace rpm
