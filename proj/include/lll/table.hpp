#pragma once

#include <cstdint>
#include <vector>

#include "lll/events.hpp"
#include "lll/rng.hpp"

namespace lll {

/// Lazily materialized table of independent draws R(i, j): row i is an
/// unbounded stream of samples from variable i's marginal, with positions
/// numbered from 1.  Each entry is a pure function of (seed, i, j) -- the
/// order in which cells are first touched never changes their values -- so a
/// resampling run and any later diagnostics that share a seed read the same
/// randomness.
class resampling_table {
  public:
    resampling_table(var_space space, std::uint64_t seed);

    int n() const { return space_.n(); }
    const var_space& space() const { return space_; }
    std::uint64_t seed() const { return seed_; }

    /// R(i, j) for 1-based position j; materializes the row up to j on first
    /// access.  The cache is the only mutable state, so a const table still
    /// exposes the whole infinite array.
    int entry(int i, int j) const;

    /// How much of row i has been materialized (diagnostics only).
    int materialized(int i) const { return static_cast<int>(rows_[i].size()); }

  private:
    var_space space_;
    std::uint64_t seed_;
    mutable std::vector<std::vector<int>> rows_;
};

} // namespace lll
