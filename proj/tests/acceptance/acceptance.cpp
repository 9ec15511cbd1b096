// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <fmt/core.h>

#include "decision_table.h"
#include "rpmsim/alert_engine.h"
#include "rpmsim/cli.h"
#include "rpmsim/dataset_io.h"
#include "rpmsim/messiness.h"
#include "rpmsim/simulation.h"
#include "rpmsim/validation.h"
#include "support.h"

using namespace rpm;
using rpm::testing::TempDir;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

SimulationConfig seeded(std::uint64_t seed) {
    SimulationConfig cfg = default_config();
    cfg.seed = seed;
    return cfg;
}

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t bundle_hash(const BundleFiles& files) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& [name, body] : files) h = fnv1a(body, fnv1a(name + '\0', h));
    return h;
}

Outcome alert_rate() {
    double lo = 1, hi = 0, slowest = 0;
    bool ok = true;
    for (auto seed : kSeeds) {
        auto t0 = std::chrono::steady_clock::now();
        Cohort c = simulate(seeded(seed));
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        double rate = c.measurements.empty() ? 0.0 : static_cast<double>(c.alerts.size()) / c.measurements.size();
        lo = std::min(lo, rate);
        hi = std::max(hi, rate);
        slowest = std::max(slowest, secs);
        ok = ok && rate >= 0.10 && rate <= 0.16 && secs < 10.0;
    }
    return {ok, fmt::format("rate range [{:.4f}, {:.4f}] over 10 seeds, slowest run {:.2f}s", lo, hi, slowest)};
}

Outcome determinism() {
    TempDir dir("acc-det");
    std::vector<std::string> flags{"--patients", "10", "--hcps", "6", "--days", "180", "--seed", "20240101"};
    std::uint64_t hashes[2]{};
    std::size_t n_files = 0;
    for (int i = 0; i < 2; ++i) {
        std::vector<std::string> args{"generate", "--out", (dir / ("run" + std::to_string(i))).string()};
        args.insert(args.end(), flags.begin(), flags.end());
        std::ostringstream out, err;
        if (int code = cli::run(args, out, err); code != cli::kOk)
            return {false, fmt::format("generate exited {}: {}", code, err.str())};
        auto files = read_bundle_files(dir / ("run" + std::to_string(i)));
        n_files = files.size();
        hashes[i] = bundle_hash(files);
    }
    return {hashes[0] == hashes[1], fmt::format("{} files, hash {:016x} vs {:016x}", n_files, hashes[0], hashes[1])};
}

Outcome oracle_equivalence() {
    TempDir dir("acc-oracle");
    std::size_t alerts = 0, excluded = 0;
    for (auto seed : kSeeds) {
        Cohort truth = simulate(seeded(seed));
        auto target = dir / ("s" + std::to_string(seed));
        export_bundle(inject_messiness(truth), target);
        Cohort back = import_bundle(target);
        auto skip = injected_duplicate_ids(back);
        auto rescanned = scan(back.measurements, back.patients, rule_params(back.config), skip);
        if (alert_keys(rescanned) != alert_keys(truth.alerts))
            return {false, fmt::format("seed {}: rescan found {} alerts, simulation raised {}", seed, rescanned.size(),
                                       truth.alerts.size())};
        alerts += truth.alerts.size();
        excluded += skip.size();
    }
    return {true, fmt::format("{} alerts matched over 10 seeds, {} ledger duplicates excluded", alerts, excluded)};
}

bool only_kind(const ValidationReport& r, ViolationKind kind) {
    if (r.ok()) return false;
    for (const auto& v : r.violations)
        if (v.kind != kind) return false;
    return true;
}

Outcome causal_order() {
    std::size_t cohorts = 0, violations = 0, mutations = 0;
    std::vector<std::string> failures;
    for (auto seed : kSeeds) {
        for (Mode mode : {Mode::batch, Mode::interactive}) {
            SimulationConfig cfg = seeded(seed);
            cfg.mode = mode;
            Cohort c = simulate(cfg);
            ++cohorts;
            violations += validate_cohort(c).violations.size();
            violations += validate_cohort(inject_messiness(c)).violations.size();
            if (mode != Mode::batch) continue;

            if (!c.alerts.empty()) {
                Cohort m = c;
                auto victim = m.alerts[m.alerts.size() / 2].measurement_id;
                std::erase_if(m.measurements, [&](const Measurement& x) { return x.id == victim; });
                auto r = validate_cohort(m);
                ++mutations;
                if (!only_kind(r, ViolationKind::dangling_reference))
                    failures.push_back(fmt::format("seed {}: deleting {} gave {}", seed, victim.value,
                                                   r.ok() ? "no violation" : describe(r.violations.front())));
            }

            std::map<AlertId, int> per_alert;
            for (const auto& resp : c.responses) ++per_alert[resp.alert_id];
            for (std::size_t i = 0; i < c.responses.size(); ++i) {
                const auto& resp = c.responses[i];
                if (resp.action != Action::dismiss || per_alert[resp.alert_id] != 1) continue;
                Cohort m = c;
                m.responses[i].timestamp = find_alert(m, resp.alert_id)->created_at - std::chrono::hours(1);
                auto r = validate_cohort(m);
                ++mutations;
                if (r.violations.size() != 1 || !only_kind(r, ViolationKind::causal_order))
                    failures.push_back(fmt::format("seed {}: backdating {} gave {} violations", seed, resp.id.value,
                                                   r.violations.size()));
                break;
            }
        }
    }
    bool ok = violations == 0 && failures.empty() && mutations >= 2 * std::size(kSeeds);
    std::string detail = fmt::format("{} cohorts (plus messy exports) with {} violations, {} mutations", cohorts,
                                     violations, mutations);
    if (!failures.empty()) detail += "; " + failures.front();
    return {ok, detail};
}

// Linear ramp from 0 after the change day up to the full magnitude at onset_days.
double ramped(const MedicationEffect& e, int days_since_change) {
    if (days_since_change <= 0) return 0.0;
    double frac = std::min(1.0, static_cast<double>(days_since_change) / e.onset_days);
    return (e.direction == Direction::up ? 1.0 : -1.0) * e.magnitude * frac;
}

struct WindowMean {
    double sum = 0;
    int n = 0;
    double mean() const { return n ? sum / n : 0.0; }
};

WindowMean window_mean(const Cohort& c, const PatientId& p, Vital v, Date from, Date to) {
    WindowMean w;
    for (const auto& m : c.measurements) {
        Date d = date_of(m.timestamp);
        if (m.patient_id == p && m.vital == v && from <= d && d <= to) {
            w.sum += m.value;
            ++w.n;
        }
    }
    return w;
}

bool other_change_in(const Cohort& c, const PatientId& p, Vital v, Date from, Date to, const MedicationChangeId* except) {
    for (const auto& mc : c.medication_changes) {
        Date d = date_of(mc.timestamp);
        if (mc.patient_id == p && mc.effect.vital == v && from <= d && d <= to && (!except || mc.id != *except))
            return true;
    }
    return false;
}

Outcome medication_feedback() {
    int events = 0, failures = 0;
    double worst = 0;
    for (std::uint64_t seed = 1; seed <= 20 && events < 20; ++seed) {
        SimulationConfig cfg = seeded(seed);
        Cohort base = simulate(cfg);
        Date last = cfg.start_date + std::chrono::days(base.clock_day - 1);
        for (const auto& resp : base.responses) {
            if (resp.action != Action::adjust_medication) continue;
            const Alert* alert = find_alert(base, resp.alert_id);
            const MedicationChange* mc = nullptr;
            for (const auto& x : base.medication_changes)
                if (x.patient_id == alert->patient_id && x.timestamp == resp.timestamp) mc = &x;
            if (!mc) continue;
            Date day = date_of(mc->timestamp);
            Date from = day + std::chrono::days(1), to = day + std::chrono::days(14);
            if (to > last) continue;
            Vital v = mc->effect.vital;
            if (other_change_in(base, mc->patient_id, v, day, to, &mc->id)) continue;

            SimulateOptions opts;
            opts.suppress_medication_for = {alert->id};
            Cohort alt = simulate(cfg, opts);
            if (other_change_in(alt, mc->patient_id, v, day, to, nullptr)) continue;

            WindowMean with = window_mean(base, mc->patient_id, v, from, to);
            WindowMean without = window_mean(alt, mc->patient_id, v, from, to);
            if (with.n < 2 || without.n < 2) continue;

            double expected = 0;
            for (const auto& m : base.measurements)
                if (m.patient_id == mc->patient_id && m.vital == v && from <= date_of(m.timestamp) &&
                    date_of(m.timestamp) <= to)
                    expected += ramped(mc->effect, days_between(day, date_of(m.timestamp)));
            expected /= with.n;

            const PatientProfile* p = find_patient(base, mc->patient_id);
            double sigma = cfg.noise_for(p->stability_class)[v];
            double step = std::pow(10.0, -precision_of(v));
            double per_reading = std::sqrt(sigma * sigma + step * step / 12.0);
            double se = per_reading * std::sqrt(1.0 / with.n + 1.0 / without.n);
            double z = std::abs((with.mean() - without.mean()) - expected) / se;
            worst = std::max(worst, z);
            ++events;
            if (z > 3.0) ++failures;
        }
    }
    return {events >= 5 && failures == 0,
            fmt::format("{} adjust_medication events, {} outside 3 SE, worst {:.2f} SE", events, failures, worst)};
}

Outcome admission_suppression() {
    double admitted_days = 0, submitted = 0, expected = 0, variance = 0;
    for (std::uint64_t seed = 1; seed <= 200 && admitted_days < 1500; ++seed) {
        SimulationConfig cfg = seeded(seed);
        Cohort c = simulate(cfg);
        Date end_of_clock = cfg.start_date + std::chrono::days(c.clock_day);
        std::set<std::pair<PatientId, Date>> reported;
        for (const auto& m : c.measurements) reported.insert({m.patient_id, date_of(m.timestamp)});
        for (const auto& a : c.admissions) {
            double p = find_patient(c, a.patient_id)->adherence * cfg.admission_adherence_multiplier;
            for (Date d = a.start; d < a.end && d < end_of_clock; d += std::chrono::days(1)) {
                ++admitted_days;
                expected += p;
                variance += p * (1 - p);
                if (reported.contains({a.patient_id, d})) ++submitted;
            }
        }
    }
    double half_width = 2.576 * std::sqrt(variance);
    bool ok = admitted_days >= 1000 && std::abs(submitted - expected) <= half_width;
    return {ok, fmt::format("{} admitted patient-days, {} submissions (rate {:.4f}), expected {:.1f} +/- {:.1f}",
                            admitted_days, submitted, admitted_days ? submitted / admitted_days : 0.0, expected,
                            half_width)};
}

Outcome decision_table() {
    const auto& table = rpm::testing::decision_truth_table();
    std::set<int> rules;
    bool friday = false, novice = false;
    int agree = 0;
    std::string first_miss;
    for (const auto& row : table) {
        rules.insert(row.rule);
        friday |= row.rule == 4;
        novice |= row.rule == 3;
        if (decide(rpm::testing::context_of(row)) == row.expected)
            ++agree;
        else if (first_miss.empty())
            first_miss = row.name;
    }
    bool ok = table.size() >= 20 && rules.size() == 5 && friday && novice && agree == static_cast<int>(table.size());
    std::string detail = fmt::format("{}/{} rows agree, {} of 5 rules covered", agree, table.size(), rules.size());
    if (!first_miss.empty()) detail += "; first mismatch: " + first_miss;
    return {ok, detail};
}

Outcome round_trip() {
    std::mt19937_64 gen(0x5eedull);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };
    auto prob = [&] { return std::round(std::uniform_real_distribution<double>(0.0, 0.3)(gen) * 1000) / 1000; };
    TempDir dir("acc-rt");
    int cases = 0, nonempty = 0;
    for (; cases < 60; ++cases) {
        SimulationConfig cfg = default_config();
        cfg.n_patients = pick(0, 6);
        cfg.n_hcps = pick(1, 4);
        cfg.duration_days = pick(0, 60);
        cfg.seed = gen();
        cfg.mode = pick(0, 1) ? Mode::interactive : Mode::batch;
        cfg.start_date = make_date(pick(2020, 2030), static_cast<unsigned>(pick(1, 12)), static_cast<unsigned>(pick(1, 28)));
        cfg.messiness = {prob(), prob(), prob()};
        Cohort c = inject_messiness(simulate(cfg));
        nonempty += !c.measurements.empty();
        auto target = dir / ("c" + std::to_string(cases));
        export_bundle(c, target);
        if (!(import_bundle(target) == c))
            return {false, fmt::format("config {} (seed {}) did not survive export/import", cases, cfg.seed)};
    }
    return {true, fmt::format("{} random configs round-tripped, {} with measurements", cases, nonempty)};
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"alert-rate", alert_rate},
        {"determinism", determinism},
        {"oracle-equivalence", oracle_equivalence},
        {"causal-order", causal_order},
        {"medication-feedback", medication_feedback},
        {"admission-suppression", admission_suppression},
        {"decision-table", decision_table},
        {"round-trip", round_trip},
    };
    int failed = 0;
    int n = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << fmt::format("{} [{}] {}: {}", o.pass ? "PASS" : "FAIL", ++n, name, o.detail) << std::endl;
    }
    std::cout << fmt::format("{} of {} criteria passed", n - failed, n) << std::endl;
    return failed == 0 ? 0 : 1;
}
