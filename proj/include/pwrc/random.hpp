#pragma once

#include <cstdint>
#include <random>

namespace pwrc {

/// Seeded generator whose output is identical on every platform.
///
/// The engine is std::mt19937_64, whose sequence the standard fixes. The
/// standard distributions are implementation defined, so uniform, bounded
/// integer and normal draws are derived here from raw engine output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound), rejection sampled. bound must be > 0.
    std::uint64_t below(std::uint64_t bound);
    /// Standard normal draw (Box-Muller, one value per call).
    double normal();
    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent per-trial seed, so trials can run in any order or in parallel.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace pwrc
