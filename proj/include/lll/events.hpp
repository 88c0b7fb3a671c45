#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "lll/rng.hpp"

namespace lll {

/// A full assignment of values to variables; values[i] is the value of
/// variable i, always in [0, domain size of i).
using assignment = std::vector<int>;

/// Product space of finitely many independent discrete variables.  Variable i
/// takes value v with probability probs[i][v]; every row must sum to 1.
class var_space {
  public:
    explicit var_space(std::vector<std::vector<double>> probs);

    /// n variables, each uniform on {0, ..., domain-1}.
    static var_space uniform(int n, int domain);
    /// n fair bits -- the k-SAT setting.
    static var_space uniform_bits(int n) { return uniform(n, 2); }

    int n() const { return static_cast<int>(probs_.size()); }
    int domain(int i) const { return static_cast<int>(probs_[i].size()); }
    std::span<const double> probs(int i) const { return probs_[i]; }

    /// One independent draw of every variable from its marginal.
    assignment sample(rng_stream& rng) const;

  private:
    std::vector<std::vector<double>> probs_;
};

/// An event determined by the values of a fixed variable subset (its scope).
/// Two representations share the type: an atomic conjunction
/// "X(i1)=v1 and X(i2)=v2 and ..." (the shape bad events usually take, cheap
/// to evaluate and to integrate), or an arbitrary predicate over the scoped
/// values for everything else.
class scoped_event {
  public:
    /// Conjunction over distinct variables; pairs are canonicalized into
    /// ascending variable order.  An empty conjunction is the sure event.
    static scoped_event conjunction(std::vector<std::pair<int, int>> var_vals);

    /// Single equality X(var) = value.
    static scoped_event equals(int var, int value);

    /// Single-variable membership X(var) in `values` (the shape the
    /// singleton bound applies to).
    static scoped_event value_in(int var, std::vector<int> values);

    /// Arbitrary predicate.  `pred` receives the scoped values in ascending
    /// variable order.  `scope` need not be pre-sorted.
    static scoped_event predicate(std::vector<int> scope,
                                  std::function<bool(std::span<const int>)> pred);

    /// Scope as a sorted list of distinct variable indices.
    const std::vector<int>& scope() const { return scope_; }

    bool is_conjunction() const { return !pred_; }

    /// Conjunction pairs (variable, value), parallel to scope().  Only valid
    /// for conjunction events.
    std::span<const int> conjunction_values() const { return conj_values_; }

    /// Evaluate on a full assignment.
    bool holds(const assignment& x) const;

    /// Evaluate on values given in scope order (scoped_vals.size() == scope size).
    bool holds_scoped(std::span<const int> scoped_vals) const;

  private:
    scoped_event() = default;

    std::vector<int> scope_;
    std::vector<int> conj_values_; // parallel to scope_ when is_conjunction()
    std::function<bool(std::span<const int>)> pred_;
};

/// A permutation of [0, n) with its inverse kept in sync, supporting the
/// entry swaps the resampling step of the swapping algorithm is built from.
class permutation {
  public:
    explicit permutation(int n);

    /// Uniformly random permutation (Fisher-Yates).
    static permutation random(int n, rng_stream& rng);

    int size() const { return static_cast<int>(fwd_.size()); }
    int operator()(int x) const { return fwd_[x]; }
    int inverse(int y) const { return inv_[y]; }
    const std::vector<int>& images() const { return fwd_; }

    /// Exchange the images of positions x1 and x2.
    void swap_positions(int x1, int x2);

  private:
    std::vector<int> fwd_, inv_;
};

/// Atomic event over a random permutation: the conjunction
/// "pi(x1)=y1 and ... and pi(xr)=yr".  Pairs are canonicalized into ascending
/// order; the x's must be distinct and the y's must be distinct, otherwise the
/// event would be empty.
class atomic_perm_event {
  public:
    explicit atomic_perm_event(std::vector<std::pair<int, int>> pairs);

    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    int size() const { return static_cast<int>(pairs_.size()); }

    bool holds(const permutation& pi) const;

    /// True when every pair of `other` is also a pair of this event.
    bool contains(const atomic_perm_event& other) const;

  private:
    std::vector<std::pair<int, int>> pairs_;
};

// --- probabilities ---------------------------------------------------------

/// Exact probability of `e` by enumerating its scope (conjunctions are read
/// off the marginals directly).  Throws scope_too_large if the scope has more
/// than kMaxScopeStates joint values.
double event_probability(const var_space& space, const scoped_event& e);

/// Exact P(all of `positive` hold and none of `negative` hold), by
/// enumerating the union of all scopes.  Same budget as event_probability.
double joint_probability(const var_space& space,
                         std::span<const scoped_event* const> positive,
                         std::span<const scoped_event* const> negative);

/// Exact P(at least one of `events` holds).
double any_probability(const var_space& space, std::span<const scoped_event> events);

/// Probability that a uniform permutation of [0, n) satisfies an r-pair
/// atomic event: (n-r)! / n!.
double perm_event_probability(int n, const atomic_perm_event& e);

/// Exact P(at least one of `events` holds) under a uniform permutation of
/// [0, n), by inclusion-exclusion over event subsets (at most
/// kMaxUnionEvents events).
double perm_any_probability(int n, std::span<const atomic_perm_event> events);

/// Enumeration budgets for the exact routines above.
inline constexpr std::uint64_t kMaxScopeStates = std::uint64_t{1} << 24;
inline constexpr int kMaxUnionEvents = 20;

// --- dependency and restriction --------------------------------------------

/// Variable setting: events are related iff their scopes intersect.
bool related(const scoped_event& a, const scoped_event& b);

/// Permutation setting: atomic events are related iff some pair of one shares
/// a position x or a value y with some pair of the other.
bool related(const atomic_perm_event& a, const atomic_perm_event& b);

/// Indices (in input order) of the bad events that can still fail e, i.e.
/// those B with P(e | B) < 1.  Computed without division as P(not-e and B) > 0.
std::vector<int> restrict_bad_events(const var_space& space,
                                     std::span<const scoped_event> bad_events,
                                     const scoped_event& e);

/// Permutation analogue: B is dropped exactly when it contains every pair of
/// `e` (the only way an atomic event can force another).
std::vector<int> restrict_bad_events(std::span<const atomic_perm_event> bad_events,
                                     const atomic_perm_event& e);

} // namespace lll
