#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace lll {

/// Counter-based pseudo-random stream.
///
/// Every consumer of randomness in the library receives its own stream,
/// derived from a master seed plus a chain of (label, index) pairs.  Streams
/// derived with identical (seed, labels, indices) produce identical output
/// forever, independent of what any sibling stream does.  That is what makes
/// whole experiments replayable and safely parallelizable: trial i always
/// draws from derive("trial", i) no matter which thread runs it.
///
/// Internally this is SplitMix64 (a counter hashed through a 64-bit finalizer)
/// with the stream key as the initial counter value.  Statistical quality is
/// more than adequate for the Monte Carlo tolerances used here.
class rng_stream {
  public:
    explicit rng_stream(std::uint64_t seed) : state_(mix(seed ^ kSeedTag)) {}

    /// Child stream identified by a purpose label and an index.  The label
    /// keeps unrelated consumers (tables, trials, instance generators, ...)
    /// from colliding even when they use the same indices.
    [[nodiscard]] rng_stream derive(std::string_view label, std::uint64_t index = 0) const {
        std::uint64_t h = state_;
        for (unsigned char c : label) h = mix(h ^ c);
        h = mix(h ^ mix(index ^ kIndexTag));
        return rng_stream(h, /*raw=*/true);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return finalize(state_);
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), free of modulo bias (rejection sampling).
    std::uint64_t next_below(std::uint64_t n) {
        // Largest multiple of n that fits in 64 bits; values at or above it
        // would skew the distribution and are redrawn.
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    bool next_bernoulli(double p) { return next_double() < p; }

    /// Index drawn from the categorical distribution given by `probs`
    /// (assumed to sum to 1) via inverse CDF on one uniform draw.
    int next_categorical(std::span<const double> probs) {
        double u = next_double();
        double acc = 0.0;
        for (std::size_t v = 0; v + 1 < probs.size(); ++v) {
            acc += probs[v];
            if (u < acc) return static_cast<int>(v);
        }
        return static_cast<int>(probs.size()) - 1;
    }

  private:
    rng_stream(std::uint64_t raw_state, bool) : state_(raw_state) {}

    static constexpr std::uint64_t kSeedTag = 0x5ca1ab1e0ddba11ULL;
    static constexpr std::uint64_t kIndexTag = 0x9d2c5680ca876967ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        return finalize(z);
    }

    static constexpr std::uint64_t finalize(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace lll
