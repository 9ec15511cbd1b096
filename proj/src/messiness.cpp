#include "rpmsim/messiness.h"

#include <algorithm>

#include "rpmsim/random.h"

namespace rpm {

namespace {

constexpr std::uint64_t kMessinessStream = 4;

constexpr std::array<std::string_view, 10> kIrrelevantComments{
    "Had a nice walk with the dog today",
    "Grandson is visiting this weekend",
    "Replaced the batteries of the scale",
    "Forgot my glasses, hope this is right",
    "Lovely weather this morning",
    "Watching the football tonight",
    "The app asked me to update again",
    "Neighbour brought soup",
    "Going to the market later",
    "test",
};

} // namespace

Cohort inject_messiness(const Cohort& cohort) {
    Cohort out = cohort;
    const auto& p = cohort.config.messiness;
    Rng rng = Rng::stream(cohort.config.seed, {kMessinessStream, static_cast<std::uint64_t>(cohort.clock_day)});

    auto already = injected_duplicate_ids(cohort);
    std::uint64_t next = 1;
    for (const auto& m : cohort.measurements) next = std::max(next, m.id.sequence() + 1);

    std::vector<Measurement> duplicates;
    for (auto& m : out.measurements) {
        const double u_comment = rng.uniform();
        const std::uint64_t pick = rng.bits();
        const double u_duplicate = rng.uniform();
        const int jitter = rng.uniform_int(1, 120);
        if (already.contains(m.id)) continue;
        if (!m.comment && u_comment < p.p_irrelevant_comment) {
            m.comment = std::string(kIrrelevantComments[pick % kIrrelevantComments.size()]);
            out.truth_ledger.push_back({LedgerKind::injected_irrelevant_comment, std::nullopt, m.id});
        }
        if (u_duplicate < p.p_duplicate) {
            Measurement copy = m;
            copy.id = MeasurementId::make(next++);
            copy.timestamp += std::chrono::seconds(jitter);
            out.truth_ledger.push_back({LedgerKind::injected_duplicate, m.id, copy.id});
            duplicates.push_back(std::move(copy));
        }
    }
    out.measurements.insert(out.measurements.end(), duplicates.begin(), duplicates.end());
    canonicalize(out);
    return out;
}

Cohort strip_messiness(const Cohort& cohort) {
    Cohort out = cohort;
    auto duplicates = injected_duplicate_ids(cohort);
    std::set<MeasurementId> commented;
    for (const auto& e : cohort.truth_ledger)
        if (e.kind == LedgerKind::injected_irrelevant_comment) commented.insert(e.injected_id);
    std::erase_if(out.measurements, [&](const Measurement& m) { return duplicates.contains(m.id); });
    for (auto& m : out.measurements)
        if (commented.contains(m.id)) m.comment.reset();
    out.truth_ledger.clear();
    return out;
}

} // namespace rpm
