#include "rpmsim/hcp_policy.h"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>

namespace rpm {

namespace {

std::vector<const HcpProfile*> on_duty(std::span<const HcpProfile> hcps, Date date) {
    Weekday day = weekday_of(date);
    std::vector<const HcpProfile*> out;
    for (const auto& h : hcps)
        if (h.on_duty(day)) out.push_back(&h);
    std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->id < b->id; });
    return out;
}

template <class IdT, class T>
IdT next_id(const std::vector<T>& items) {
    std::uint64_t max = 0;
    for (const auto& item : items) max = std::max(max, item.id.sequence());
    return IdT::make(max + 1);
}

std::string rules_phrase(const std::set<AlertRule>& rules) {
    std::vector<std::string> parts;
    if (rules.contains(AlertRule::threshold_high)) parts.emplace_back("a value above the upper limit");
    if (rules.contains(AlertRule::threshold_low)) parts.emplace_back("a value below the lower limit");
    if (rules.contains(AlertRule::abrupt_change)) parts.emplace_back("an abrupt change from recent readings");
    if (parts.empty()) return "an unspecified rule";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) out += " and " + parts[i];
    return out;
}

std::string reading(const NoteEvent& e) {
    if (!e.vital) return {};
    return fmt::format("{} {} {}", to_string(*e.vital), format_value(*e.vital, e.value), unit_of(*e.vital));
}

} // namespace

std::optional<HcpId> assign(const Alert& alert, std::span<const HcpProfile> hcps, Date date) {
    auto duty = on_duty(hcps, date);
    if (duty.empty()) return std::nullopt;
    return duty[alert.id.sequence() % duty.size()]->id;
}

std::optional<HcpId> successor(const HcpId& current, std::span<const HcpProfile> hcps, Date date) {
    auto pick_after = [&](std::vector<const HcpProfile*> list) -> std::optional<HcpId> {
        std::erase_if(list, [&](auto* h) { return h->id == current; });
        if (list.empty()) return std::nullopt;
        auto it = std::find_if(list.begin(), list.end(), [&](auto* h) { return current < h->id; });
        return (it == list.end() ? list.front() : *it)->id;
    };
    if (auto next = pick_after(on_duty(hcps, date))) return next;
    std::vector<const HcpProfile*> all;
    for (const auto& h : hcps) all.push_back(&h);
    std::sort(all.begin(), all.end(), [](auto* a, auto* b) { return a->id < b->id; });
    return pick_after(all);
}

int days_until_next_duty(std::span<const HcpProfile> hcps, Date date) {
    for (int k = 1; k <= 7; ++k)
        if (!on_duty(hcps, date + std::chrono::days(k)).empty()) return k;
    return 8;
}

Action decide(const DecisionContext& ctx) {
    const auto& rules = ctx.alert.rules;
    bool threshold = rules.contains(AlertRule::threshold_high) || rules.contains(AlertRule::threshold_low);
    if (threshold && ctx.repeat_count >= 3) return Action::adjust_medication;
    if (ctx.alert.severity == Severity::high) return Action::call_patient;
    if (ctx.hcp.experience == Experience::novice && ctx.hcp.confidence < 0.5) return Action::contact_colleague;
    if (ctx.weekday == Weekday::friday && ctx.days_until_next_duty >= 2 && ctx.alert.severity == Severity::mild)
        return Action::call_patient;
    return Action::dismiss;
}

std::string render_note(const HcpProfile& hcp, const NoteEvent& e) {
    const std::string r = reading(e);
    const std::string lead = r.empty() ? std::string("Alert") : r;
    if (hcp.doc_style == DocStyle::terse) {
        switch (e.action) {
        case Action::call_patient: return fmt::format("{}. Called pt, advised.", lead);
        case Action::adjust_medication: return fmt::format("{}. Meds adjusted, recheck.", lead);
        case Action::contact_colleague: return fmt::format("{}. Unsure, asked colleague.", lead);
        case Action::dismiss: return fmt::format("{}. {}, dismissed.", lead, e.severity == Severity::high ? "High" : "Mild");
        }
    }
    std::string who = e.patient_name.empty() ? std::string("the patient") : e.patient_name;
    std::string opening =
        r.empty() ? fmt::format("Reviewed a {} severity alert for {} caused by {}.", to_string(e.severity), who,
                                rules_phrase(e.rules))
                  : fmt::format("Reviewed a {} severity alert for {} caused by {}. The submitted reading was {}.",
                                to_string(e.severity), who, rules_phrase(e.rules), r);
    switch (e.action) {
    case Action::call_patient:
        return opening + " Called the patient to ask about symptoms, fluid intake and medication use, gave advice "
                         "and asked them to keep measuring daily.";
    case Action::adjust_medication:
        return opening + " Because this keeps recurring over the past week I adjusted the medication and will "
                         "review the trend again in a few days.";
    case Action::contact_colleague:
        return opening + " I am not fully sure how to interpret this pattern, so I asked a colleague to take a "
                         "look before deciding on the next step.";
    case Action::dismiss:
        return opening + " Looked at the recent history and the wider context; nothing here requires action "
                         "right now, so the alert was dismissed.";
    }
    return opening;
}

std::string render_consultation(const HcpProfile& hcp, const NoteEvent& e, Channel channel) {
    const std::string r = reading(e);
    if (hcp.doc_style == DocStyle::terse)
        return channel == Channel::phone ? fmt::format("Phone call re {}. Advised.", r.empty() ? "alert" : r)
                                         : fmt::format("Ward visit re {}.", r.empty() ? "alert" : r);
    std::string who = e.patient_name.empty() ? std::string("the patient") : e.patient_name;
    if (channel == Channel::phone)
        return fmt::format("Telephone consultation with {} following an alert on {}. Discussed symptoms, daily "
                           "routine and medication adherence; patient understood the advice given.",
                           who, r.empty() ? "recent measurements" : r);
    return fmt::format("Visited {} on the ward following an alert on {}. Reviewed the clinical picture with the "
                       "ward team and agreed on the plan for the coming days.",
                       who, r.empty() ? "recent measurements" : r);
}

MedicationRule medication_for(Vital vital, Direction deviation) {
    bool up = deviation == Direction::up;
    ChangeKind change = up ? ChangeKind::increase : ChangeKind::decrease;
    Direction effect = up ? Direction::down : Direction::up;
    switch (vital) {
    case Vital::weight: return {"furosemide", change, {vital, effect, up ? 1.5 : 1.0, 3}};
    case Vital::systolic_bp: return {"lisinopril", change, {vital, effect, up ? 12.0 : 10.0, 7}};
    case Vital::diastolic_bp: return {"lisinopril", change, {vital, effect, up ? 8.0 : 6.0, 7}};
    case Vital::heart_rate: return {"bisoprolol", change, {vital, effect, up ? 10.0 : 8.0, 5}};
    }
    return {"furosemide", change, {vital, effect, 1.0, 3}};
}

Direction deviation_of(const Alert& alert, const Measurement& m, const PatientProfile& profile) {
    if (alert.rules.contains(AlertRule::threshold_high)) return Direction::up;
    if (alert.rules.contains(AlertRule::threshold_low)) return Direction::down;
    return m.value >= profile.baselines[m.vital] ? Direction::up : Direction::down;
}

AlertResponse apply_response(Cohort& cohort, const AlertId& alert_id, const HcpId& hcp_id, Action action,
                             DateTime when, const ResponseOptions& options) {
    Alert* alert = find_alert(cohort, alert_id);
    if (!alert) throw NotFoundError("unknown alert " + alert_id.value);
    const HcpProfile* hcp = find_hcp(cohort, hcp_id);
    if (!hcp) throw NotFoundError("unknown HCP " + hcp_id.value);
    if (alert->status == AlertStatus::resolved) throw ConflictError("alert " + alert_id.value + " is already resolved");
    const Measurement* m = find_measurement(cohort, alert->measurement_id);
    if (!m) throw NotFoundError("alert " + alert_id.value + " references unknown measurement");
    const PatientProfile* patient = find_patient(cohort, alert->patient_id);
    if (!patient) throw NotFoundError("alert " + alert_id.value + " references unknown patient");
    if (when < alert->created_at) throw ConflictError("response would precede alert " + alert_id.value);

    NoteEvent event{action, patient->display_name, m->vital, m->value, alert->rules, alert->severity};
    AlertResponse response{next_id<ResponseId>(cohort.responses), alert_id, hcp_id, action,
                           options.note.empty() ? render_note(*hcp, event) : options.note, when};

    switch (action) {
    case Action::contact_colleague:
        alert->assigned_hcp_id = successor(hcp_id, cohort.hcps, date_of(when)).value_or(hcp_id);
        break;
    case Action::call_patient: {
        Date day = date_of(when);
        bool admitted = std::any_of(cohort.admissions.begin(), cohort.admissions.end(), [&](const Admission& a) {
            return a.patient_id == patient->id && a.covers(day);
        });
        Channel channel = admitted ? Channel::in_person : Channel::phone;
        cohort.consultations.push_back(Consultation{next_id<ConsultationId>(cohort.consultations), patient->id,
                                                    hcp_id, when, channel, render_consultation(*hcp, event, channel)});
        break;
    }
    case Action::adjust_medication:
        if (options.record_medication) {
            auto rule = medication_for(m->vital, deviation_of(*alert, *m, *patient));
            cohort.medication_changes.push_back(MedicationChange{next_id<MedicationChangeId>(cohort.medication_changes),
                                                                 patient->id, rule.drug, rule.change, when,
                                                                 rule.effect});
        }
        break;
    case Action::dismiss: break;
    }
    if (is_terminal(action)) {
        alert->status = AlertStatus::resolved;
        alert->assigned_hcp_id = hcp_id;
    }
    cohort.responses.push_back(std::move(response));
    return cohort.responses.back();
}

} // namespace rpm
