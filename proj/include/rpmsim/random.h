#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rpm {

/// Seeded stream with platform-independent draws: the engine is
/// std::mt19937_64 (fully specified), the distributions are computed here
/// because the standard ones are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Independent stream for a (seed, key...) tuple.
    static Rng stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

    std::uint64_t bits() { return engine_(); }
    double uniform();  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int uniform_int(int lo, int hi);  // inclusive
    bool bernoulli(double p) { return uniform() < p; }
    double normal();  // standard normal, consumes exactly two raw draws

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace rpm
