#include "rpmsim/simulation.h"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "rpmsim/alert_engine.h"
#include "rpmsim/hcp_policy.h"
#include "rpmsim/random.h"

namespace rpm {

namespace {

// Stream keys for Rng::stream.
constexpr std::uint64_t kProfileStream = 1;
constexpr std::uint64_t kSpikeStream = 2;
constexpr std::uint64_t kDayStream = 3;

constexpr std::array<std::string_view, 16> kFirstNames{"Anna",  "Johan", "Maria", "Pieter", "Els",    "Henk",
                                                       "Ingrid", "Kees", "Fatima", "Mohamed", "Sanne", "Willem",
                                                       "Greet", "Bram",  "Lotte", "Jan"};
constexpr std::array<std::string_view, 12> kSurnames{"de Vries", "Jansen", "Bakker", "Visser", "Smit",    "Meijer",
                                                     "Mulder",   "de Boer", "Bos",   "Vos",    "Peters", "Hendriks"};
constexpr std::array<std::string_view, 6> kComorbidities{"diabetes", "copd",    "ckd",
                                                         "atrial_fibrillation", "hypertension", "obesity"};

// Persona ranges. Baselines are drawn uniformly; thresholds sit at
// baseline -/+ a band drawn uniformly from the band range.
struct VitalRanges {
    double baseline_min, baseline_max, band_min, band_max, floor;
};
constexpr PerVital<VitalRanges> kVitalRanges{{{
    {62.0, 108.0, 2.5, 3.5, 20.0},   // weight kg
    {112.0, 138.0, 22.0, 30.0, 50.0}, // systolic mmHg
    {66.0, 84.0, 14.0, 19.0, 30.0},  // diastolic mmHg
    {62.0, 82.0, 18.0, 24.0, 25.0},  // heart rate bpm
}}};

struct AdherenceRange {
    double min, max;
};
constexpr std::array<AdherenceRange, 3> kAdherence{{{0.80, 0.98}, {0.60, 0.90}, {0.65, 0.95}}};

double sign(Direction d) { return d == Direction::up ? 1.0 : -1.0; }

std::string situated_comment(Vital v, std::optional<Direction> deviation, HomeSupport support, std::uint64_t pick) {
    static const std::map<std::pair<int, int>, std::vector<std::string_view>> pools{
        {{0, 0}, {"Feeling a bit bloated today", "Ankles look swollen", "Had a salty meal yesterday"}},
        {{0, 1}, {"Not much appetite lately", "Lots of toilet visits after the water pill"}},
        {{0, 2}, {"Weighed after breakfast today", "Same scale as always"}},
        {{1, 0}, {"Bit of a headache this morning", "Stressful day yesterday", "Forgot my tablets last night"}},
        {{1, 1}, {"Felt dizzy when standing up", "Very tired today"}},
        {{1, 2}, {"Measured sitting down as instructed", "Cuff felt tight"}},
        {{2, 0}, {"Heart racing after the stairs", "Palpitations during the night"}},
        {{2, 1}, {"Feeling sluggish", "Slept badly"}},
        {{2, 2}, {"Measured after resting", "Quiet morning"}},
    };
    int group = v == Vital::weight ? 0 : v == Vital::heart_rate ? 2 : 1;
    int dir = !deviation ? 2 : *deviation == Direction::up ? 0 : 1;
    const auto& pool = pools.at({group, dir});
    std::string text(pool[pick % pool.size()]);
    if (support == HomeSupport::low && (pick >> 16) % 3 == 0) text += ". On my own this week";
    else if (support == HomeSupport::high && (pick >> 16) % 5 == 0) text += ". My daughter helped me";
    return text;
}

PatientState build_state(const Cohort& cohort, const PatientProfile& profile, std::vector<Spike> spikes, Date date) {
    PatientState s;
    s.profile = profile;
    s.noise_scale = cohort.config.noise_for(profile.stability_class);
    for (const auto& mc : cohort.medication_changes)
        if (mc.patient_id == profile.id && date_of(mc.timestamp) <= date)
            s.effects.push_back(ActiveEffect{mc.effect, date_of(mc.timestamp)});
    s.spikes = std::move(spikes);
    s.admitted = std::any_of(cohort.admissions.begin(), cohort.admissions.end(),
                             [&](const Admission& a) { return a.patient_id == profile.id && a.covers(date); });
    return s;
}

/// Day-loop state rebuilt from a cohort so that a halted interactive run
/// resumes exactly where it stopped.
class Engine {
public:
    Engine(Cohort& cohort, const SimulateOptions& options)
        : c_(cohort), options_(options), params_(rule_params(cohort.config)) {
        auto injected = injected_duplicate_ids(c_);
        for (std::size_t i = 0; i < c_.patients.size(); ++i) {
            index_.emplace(c_.patients[i].id, i);
            spikes_.push_back(spike_schedule(c_.config, c_.patients[i], i));
        }
        std::map<MeasurementId, const Measurement*> by_id;
        for (const auto& m : c_.measurements) {
            next_measurement_ = std::max(next_measurement_, m.id.sequence() + 1);
            if (injected.contains(m.id)) continue;
            by_id.emplace(m.id, &m);
            history_[{m.patient_id, m.vital}].push_back(m);
        }
        for (const auto& a : c_.alerts) {
            next_alert_ = std::max(next_alert_, a.id.sequence() + 1);
            if (auto it = by_id.find(a.measurement_id); it != by_id.end())
                alert_times_[{a.patient_id, it->second->vital}].push_back(a.created_at);
            if (a.severity == Severity::high) high_alerts_[a.patient_id].push_back(a.created_at);
            if (a.status == AlertStatus::open) pending_.push_back(a.id);
        }
    }

    void run_day(int t) {
        const Date d = c_.config.start_date + std::chrono::days(t);
        open_admission_consultations(d);
        for (std::size_t i = 0; i < c_.patients.size(); ++i) simulate_patient(i, t, d);
        if (c_.config.mode == Mode::batch) work_queue(d);
        c_.clock_day = t + 1;
    }

    std::size_t measurements_added = 0;
    std::size_t alerts_added = 0;

private:
    void open_admission_consultations(Date d) {
        for (const auto& ad : c_.admissions) {
            if (ad.start != d || c_.hcps.empty()) continue;
            Alert probe;
            probe.id = AlertId::make(ad.id.sequence());
            HcpId hcp_id = assign(probe, c_.hcps, d).value_or(c_.hcps.front().id);
            const HcpProfile& hcp = *find_hcp(c_, hcp_id);
            const PatientProfile& patient = *find_patient(c_, ad.patient_id);
            std::string text =
                hcp.doc_style == DocStyle::terse
                    ? fmt::format("Admitted. {}.", ad.reason)
                    : fmt::format("Saw {} on the ward after admission. Reason: {}. Home monitoring is paused while "
                                  "the patient is in hospital; plan to review medication before discharge.",
                                  patient.display_name, ad.reason);
            std::uint64_t seq = 0;
            for (const auto& con : c_.consultations) seq = std::max(seq, con.id.sequence());
            c_.consultations.push_back(Consultation{ConsultationId::make(seq + 1), ad.patient_id, hcp_id, at(d, 11),
                                                    Channel::in_person, std::move(text)});
        }
    }

    void simulate_patient(std::size_t i, int t, Date d) {
        const PatientProfile& profile = c_.patients[i];
        const auto& config = c_.config;

        Rng rng = Rng::stream(config.seed, {kDayStream, i, static_cast<std::uint64_t>(t)});
        const double u_submit = rng.uniform();
        const int minute = rng.uniform_int(0, 179);
        PerVital<double> noise;
        PerVital<double> u_comment;
        PerVital<std::uint64_t> pick;
        for (auto v : kAllVitals) noise[v] = rng.normal();
        for (auto v : kAllVitals) u_comment[v] = rng.uniform();
        for (auto v : kAllVitals) pick[v] = rng.bits();
        const double u_stay = rng.uniform();

        if (d < profile.enrollment_date) return;

        PatientState state = build_state(c_, profile, spikes_[i], d);
        double p_submit = profile.adherence * (state.admitted ? config.admission_adherence_multiplier : 1.0);
        if (u_submit < p_submit) {
            const DateTime ts = at(d, 7, minute);
            for (auto v : kAllVitals) {
                double value = round_for(v, next_value(state, v, d, noise[v]));
                const Range& limits = profile.thresholds[v];
                std::optional<Direction> deviation;
                if (value > limits.high) deviation = Direction::up;
                if (value < limits.low) deviation = Direction::down;
                double p_comment = std::min(1.0, config.messiness.p_situated_comment * (deviation ? 3.0 : 1.0));

                Measurement m{MeasurementId::make(next_measurement_++), profile.id, ts, v, value, std::nullopt};
                if (u_comment[v] < p_comment)
                    m.comment = situated_comment(v, deviation, profile.home_support, pick[v]);
                auto& history = history_[{profile.id, v}];
                if (auto alert = evaluate(m, profile, history, params_)) {
                    alert->id = AlertId::make(next_alert_++);
                    alert->assigned_hcp_id = assign(*alert, c_.hcps, d);
                    alert_times_[{profile.id, v}].push_back(alert->created_at);
                    if (alert->severity == Severity::high) high_alerts_[profile.id].push_back(alert->created_at);
                    pending_.push_back(alert->id);
                    c_.alerts.push_back(std::move(*alert));
                    ++alerts_added;
                }
                history.push_back(m);
                c_.measurements.push_back(std::move(m));
                ++measurements_added;
            }
        }
        maybe_admit(profile, t, d, u_stay);
    }

    void maybe_admit(const PatientProfile& profile, int t, Date d, double u_stay) {
        const auto& policy = c_.config.admission_policy;
        if (t + 1 >= c_.config.duration_days) return;
        DateTime since = DateTime(d - std::chrono::days(policy.window_days - 1));
        for (const auto& ad : c_.admissions) {
            if (ad.patient_id != profile.id) continue;
            if (ad.end > d) return;  // in hospital or already scheduled
            since = std::max(since, DateTime(ad.end));
        }
        const auto& highs = high_alerts_[profile.id];
        auto recent = std::count_if(highs.begin(), highs.end(),
                                    [&](DateTime ts) { return ts >= since && ts < DateTime(d + std::chrono::days(1)); });
        if (recent < policy.trigger_high_alerts) return;

        int span = policy.stay_max - policy.stay_min + 1;
        int stay = policy.stay_min + std::min(span - 1, static_cast<int>(u_stay * span));
        std::uint64_t seq = 0;
        for (const auto& ad : c_.admissions) seq = std::max(seq, ad.id.sequence());
        Date start = d + std::chrono::days(1);
        c_.admissions.push_back(Admission{AdmissionId::make(seq + 1), profile.id, start,
                                          start + std::chrono::days(stay),
                                          fmt::format("decompensation suspected after {} high-severity alerts in {} days",
                                                      recent, policy.window_days)});
    }

    int repeat_count(const Alert& a, Vital v) const {
        auto it = alert_times_.find({a.patient_id, v});
        if (it == alert_times_.end()) return 1;
        DateTime from = a.created_at - std::chrono::days(7);
        auto n = std::count_if(it->second.begin(), it->second.end(),
                               [&](DateTime ts) { return ts >= from && ts <= a.created_at; });
        return std::max<int>(1, static_cast<int>(n));
    }

    void work_queue(Date d) {
        const Weekday today = weekday_of(d);
        bool anyone = std::any_of(c_.hcps.begin(), c_.hcps.end(), [&](const auto& h) { return h.on_duty(today); });
        if (!anyone || pending_.empty()) return;

        std::vector<Alert*> queue;
        for (const auto& id : pending_) queue.push_back(find_alert(c_, id));
        std::sort(queue.begin(), queue.end(),
                  [](Alert* a, Alert* b) { return std::tie(a->created_at, a->id) < std::tie(b->created_at, b->id); });

        const int next_duty = days_until_next_duty(c_.hcps, d);
        std::map<HcpId, int> worked;
        std::vector<AlertId> still_open;
        for (Alert* alert : queue) {
            if (date_of(alert->created_at) > d) {
                still_open.push_back(alert->id);
                continue;
            }
            auto on_duty = [&](const std::optional<HcpId>& id) {
                const HcpProfile* h = id ? find_hcp(c_, *id) : nullptr;
                return h && h->on_duty(today);
            };
            if (!on_duty(alert->assigned_hcp_id)) alert->assigned_hcp_id = assign(*alert, c_.hcps, d);

            const Measurement& m = *find_measurement(c_, alert->measurement_id);
            const PatientProfile& patient = c_.patients[index_.at(alert->patient_id)];
            std::set<HcpId> consulted;
            bool resolved = false;
            while (alert->assigned_hcp_id && on_duty(alert->assigned_hcp_id) &&
                   !consulted.contains(*alert->assigned_hcp_id)) {
                const HcpProfile hcp = *find_hcp(c_, *alert->assigned_hcp_id);
                DecisionContext ctx{*alert, repeat_count(*alert, m.vital), today, next_duty, patient.stability_class,
                                    hcp};
                Action action = decide(ctx);
                DateTime when = at(d, 13) + std::chrono::seconds(90 * worked[hcp.id]++);
                ResponseOptions opts;
                opts.record_medication = !options_.suppress_medication_for.contains(alert->id);
                apply_response(c_, alert->id, hcp.id, action, when, opts);
                if (is_terminal(action)) {
                    resolved = true;
                    break;
                }
                consulted.insert(hcp.id);
            }
            if (!resolved) still_open.push_back(alert->id);
        }
        pending_ = std::move(still_open);
    }

    Cohort& c_;
    const SimulateOptions& options_;
    AlertRuleParams params_;
    std::map<PatientId, std::size_t> index_;
    std::vector<std::vector<Spike>> spikes_;
    std::map<std::pair<PatientId, Vital>, std::vector<Measurement>> history_;
    std::map<std::pair<PatientId, Vital>, std::vector<DateTime>> alert_times_;
    std::map<PatientId, std::vector<DateTime>> high_alerts_;
    std::vector<AlertId> pending_;
    std::uint64_t next_measurement_ = 1;
    std::uint64_t next_alert_ = 1;
};

} // namespace

Roster generate_profiles(const SimulationConfig& config) {
    Rng rng = Rng::stream(config.seed, {kProfileStream});
    Roster roster;

    const int offset = rng.uniform_int(0, 2);
    for (int i = 0; i < config.n_patients; ++i) {
        PatientProfile p;
        p.id = PatientId::make(static_cast<std::uint64_t>(i + 1));
        p.display_name = fmt::format("{} {}", kFirstNames[rng.bits() % kFirstNames.size()],
                                     kSurnames[rng.bits() % kSurnames.size()]);
        p.age = rng.uniform_int(58, 89);
        for (auto c : kComorbidities)
            if (rng.bernoulli(0.35)) p.comorbidities.emplace(c);
        p.stability_class = static_cast<StabilityClass>((i + offset) % 3);
        const auto& adherence = kAdherence[static_cast<std::size_t>(p.stability_class)];
        p.adherence = round_to(rng.uniform(adherence.min, adherence.max), 3);
        p.home_support = rng.bernoulli(0.6) ? HomeSupport::high : HomeSupport::low;
        p.enrollment_date = config.start_date;
        for (auto v : kAllVitals) {
            const auto& r = kVitalRanges[v];
            double baseline = round_for(v, rng.uniform(r.baseline_min, r.baseline_max));
            double band = rng.uniform(r.band_min, r.band_max);
            p.baselines[v] = baseline;
            p.thresholds[v] = Range{round_for(v, baseline - band), round_for(v, baseline + band)};
        }
        roster.patients.push_back(std::move(p));
    }

    constexpr std::array<std::string_view, 10> kHcpNames{"Eva Jacobs",   "Lars Dekker", "Noor Willems", "Tim van Dijk",
                                                         "Iris Koster",  "Ruben Prins", "Maud Kok",     "Sem Verhoef",
                                                         "Julia Brouwer", "Daan Schouten"};
    std::vector<std::size_t> experienced;
    for (int j = 0; j < config.n_hcps; ++j) {
        HcpProfile h;
        h.id = HcpId::make(static_cast<std::uint64_t>(j + 1));
        h.display_name = std::string(kHcpNames[static_cast<std::size_t>(j) % kHcpNames.size()]);
        if (j >= static_cast<int>(kHcpNames.size())) h.display_name += fmt::format(" {}", j / kHcpNames.size() + 1);
        h.role = j % 3 == 2 ? Role::physician : Role::nurse;
        h.experience = (j == 0 || rng.bernoulli(0.5)) ? Experience::experienced : Experience::novice;
        h.confidence = h.experience == Experience::experienced ? round_to(rng.uniform(0.6, 0.95), 2)
                                                               : round_to(rng.uniform(0.25, 0.7), 2);
        h.doc_style = rng.bernoulli(0.5) ? DocStyle::terse : DocStyle::verbose;
        for (int day = 0; day < 5; ++day)
            if (rng.bernoulli(0.6)) h.duty_days.insert(static_cast<Weekday>(day));
        if (h.duty_days.empty()) h.duty_days.insert(static_cast<Weekday>(rng.uniform_int(0, 4)));
        if (h.experience == Experience::experienced) experienced.push_back(roster.hcps.size());
        roster.hcps.push_back(std::move(h));
    }
    // Every weekday gets an experienced HCP, so a chain of contact_colleague
    // hand-offs always reaches someone who resolves the alert.
    for (int day = 0; day < 5 && !experienced.empty(); ++day) {
        auto weekday = static_cast<Weekday>(day);
        bool covered = std::any_of(experienced.begin(), experienced.end(),
                                   [&](std::size_t k) { return roster.hcps[k].on_duty(weekday); });
        if (!covered) roster.hcps[experienced[static_cast<std::size_t>(day) % experienced.size()]].duty_days.insert(weekday);
    }
    return roster;
}

double effect_contribution(const ActiveEffect& e, Vital vital, Date date) {
    if (e.effect.vital != vital) return 0.0;
    int elapsed = days_between(e.start, date);
    if (elapsed <= 0) return 0.0;
    double ramp = std::min(1.0, static_cast<double>(elapsed) / e.effect.onset_days);
    return sign(e.effect.direction) * e.effect.magnitude * ramp;
}

double next_value(const PatientState& state, Vital vital, Date date, double noise_draw) {
    double value = state.profile.baselines[vital];
    for (const auto& e : state.effects) value += effect_contribution(e, vital, date);
    for (const auto& s : state.spikes)
        if (s.vital == vital && s.covers(date)) value += s.magnitude;
    value += noise_draw * state.noise_scale[vital];
    return std::max(value, kVitalRanges[vital].floor);
}

std::vector<Spike> spike_schedule(const SimulationConfig& config, const PatientProfile& profile,
                                  std::size_t patient_index) {
    std::vector<Spike> spikes;
    if (profile.stability_class != StabilityClass::spiky) return spikes;
    Rng rng = Rng::stream(config.seed, {kSpikeStream, patient_index});
    const double p_start = config.spike.rate_per_30_days / 30.0;
    Date busy_until = config.start_date;
    for (int t = 0; t < config.duration_days; ++t) {
        Date d = config.start_date + std::chrono::days(t);
        double u = rng.uniform();
        auto vital = static_cast<Vital>(rng.uniform_int(0, 3));
        double scale = rng.uniform(config.spike.magnitude_min, config.spike.magnitude_max);
        int duration = rng.uniform_int(config.spike.duration_min, config.spike.duration_max);
        if (d < busy_until || u >= p_start) continue;
        spikes.push_back(Spike{vital, round_for(vital, scale * config.abrupt_delta[vital]), d, duration});
        busy_until = d + std::chrono::days(duration);
    }
    return spikes;
}

PatientState patient_state(const Cohort& cohort, const PatientId& id, Date date) {
    for (std::size_t i = 0; i < cohort.patients.size(); ++i)
        if (cohort.patients[i].id == id)
            return build_state(cohort, cohort.patients[i], spike_schedule(cohort.config, cohort.patients[i], i), date);
    throw NotFoundError("unknown patient " + id.value);
}

Cohort simulate(const SimulationConfig& config, const SimulateOptions& options) {
    if (auto problems = config_problems(config); !problems.empty())
        throw ValidationError("invalid configuration", problems);
    return simulate(config, generate_profiles(config), options);
}

Cohort simulate(const SimulationConfig& config, Roster roster, const SimulateOptions& options) {
    if (auto problems = config_problems(config); !problems.empty())
        throw ValidationError("invalid configuration", problems);
    Cohort cohort;
    cohort.config = config;
    cohort.patients = std::move(roster.patients);
    cohort.hcps = std::move(roster.hcps);
    canonicalize(cohort);
    {
        Engine engine(cohort, options);
        for (int t = 0; t < config.duration_days; ++t) {
            engine.run_day(t);
            if (config.mode == Mode::interactive && open_alert_count(cohort) > 0) break;
        }
    }
    canonicalize(cohort);
    return cohort;
}

DayReport advance(Cohort& cohort, int days, const SimulateOptions& options) {
    if (cohort.config.mode != Mode::interactive) throw InvalidModeError("advance is only available in interactive mode");
    if (days < 0) throw ValidationError("invalid advance", {"days: must be >= 0"});
    if (auto open = open_alert_count(cohort); open > 0)
        throw ConflictError(fmt::format("{} alert(s) still open; respond to them before advancing", open));

    DayReport report;
    {
        Engine engine(cohort, options);
        while (report.days_run < days && !is_complete(cohort)) {
            engine.run_day(cohort.clock_day);
            ++report.days_run;
            if (open_alert_count(cohort) > 0) {
                report.halted = true;
                break;
            }
        }
        report.new_measurements = engine.measurements_added;
        report.new_alerts = engine.alerts_added;
    }
    canonicalize(cohort);
    report.complete = is_complete(cohort);
    report.clock_day = cohort.clock_day;
    return report;
}

DateTime interactive_response_time(const Cohort& cohort) {
    Date day = cohort.config.start_date + std::chrono::days(std::max(0, cohort.clock_day - 1));
    DateTime base = at(day, 17);
    auto n = std::count_if(cohort.responses.begin(), cohort.responses.end(),
                           [&](const AlertResponse& r) { return r.timestamp >= base; });
    return base + std::chrono::minutes(n);
}

} // namespace rpm
