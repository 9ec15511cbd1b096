#include "rpmsim/timeline.h"

#include <algorithm>
#include <map>
#include <tuple>

namespace rpm {

std::vector<TimelineEvent> patient_timeline(const Cohort& cohort, const PatientId& patient_id) {
    if (!find_patient(cohort, patient_id)) throw NotFoundError("unknown patient " + patient_id.value);

    std::vector<TimelineEvent> events;
    std::map<AlertId, std::vector<const AlertResponse*>> responses_by_alert;
    for (const auto& r : cohort.responses) responses_by_alert[r.alert_id].push_back(&r);

    for (const auto& m : cohort.measurements)
        if (m.patient_id == patient_id) events.push_back({EventKind::measurement, m.timestamp, m.id.value, m, {}});

    for (const auto& a : cohort.alerts) {
        if (a.patient_id != patient_id) continue;
        TimelineEvent e{EventKind::alert, a.created_at, a.id.value, a, {a.measurement_id.value}};
        if (auto it = responses_by_alert.find(a.id); it != responses_by_alert.end()) {
            for (const auto* r : it->second) {
                e.links.push_back(r->id.value);
                events.push_back({EventKind::response, r->timestamp, r->id.value, *r, {a.id.value}});
            }
        }
        events.push_back(std::move(e));
    }

    for (const auto& mc : cohort.medication_changes)
        if (mc.patient_id == patient_id)
            events.push_back({EventKind::medication_change, mc.timestamp, mc.id.value, mc, {}});
    for (const auto& c : cohort.consultations)
        if (c.patient_id == patient_id) events.push_back({EventKind::consultation, c.timestamp, c.id.value, c, {}});
    for (const auto& ad : cohort.admissions)
        if (ad.patient_id == patient_id)
            events.push_back({EventKind::admission, DateTime(ad.start), ad.id.value, ad, {}});

    auto id_key = [](const std::string& id) { return std::make_pair(id.size(), std::string_view(id)); };
    std::sort(events.begin(), events.end(), [&](const TimelineEvent& a, const TimelineEvent& b) {
        return std::make_tuple(a.timestamp, a.kind, id_key(a.id)) < std::make_tuple(b.timestamp, b.kind, id_key(b.id));
    });
    return events;
}

} // namespace rpm
