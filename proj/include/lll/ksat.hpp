#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lll/events.hpp"

namespace lll {

/// CNF formula in the DIMACS convention: literals are nonzero ints, positive
/// for "X(v) = 1" and negative for "X(v) = 0", variables numbered from 1.
struct cnf {
    int n = 0;
    std::vector<std::vector<int>> clauses;

    int clause_count() const { return static_cast<int>(clauses.size()); }
    /// Size of the shortest clause (0 with no clauses) -- the k of the bound
    /// formulas.
    int k_min() const;
    /// L: number of clauses the busiest variable occurs in.
    int max_occurrences() const;
    /// x holds 0/1 values, indexed by variable - 1.
    bool satisfied_by(const assignment& x) const;
};

/// Parse DIMACS text: "c" comment lines, a "p cnf <n> <m>" header, then m
/// clauses as 0-terminated literal lists (line breaks inside a clause are
/// fine).  Throws parse_error (with the offending line) on malformed input,
/// empty clauses, out-of-range variables, or a clause-count mismatch, and
/// duplicate_literal when a clause mentions a variable twice.
cnf load_dimacs(const std::string& text);

struct ksat_instance {
    var_space space;                      // fair coins, one per variable
    std::vector<scoped_event> bad_events; // clause violations, in clause order
    /// Whether L <= 2^k / (e k) with k the minimum clause size -- the
    /// occurrence condition under which the resampling bounds apply.  Callers
    /// may run regardless.
    bool criterion_ok = false;
};

/// LLL shape of a CNF: each clause becomes the conjunction event falsifying
/// every one of its literals, with probability 2^-|clause|.
ksat_instance cnf_to_instance(const cnf& f);

/// The independence defect e L 2^-k; requires L <= 2^k/(e k) (throws
/// criterion_violated otherwise).  L = 0 gives 0.
double epsilon_bound(int k, int L);

/// Bit-packed 0/1 sample columns, so deviation scans cost a popcount pass
/// instead of revisiting every assignment.
class sample_pack {
  public:
    explicit sample_pack(int n);

    void add(const assignment& x); // values must be 0/1

    int n() const { return static_cast<int>(cols_.size()); }
    long long count() const { return count_; }
    std::span<const std::uint64_t> column(int i) const { return cols_[i]; }

  private:
    std::vector<std::vector<std::uint64_t>> cols_;
    long long count_ = 0;
};

struct deviation_result {
    double deviation = 0.0; // max |frequency - 2^-j| over the cells tried
    double se = 0.0;        // binomial standard error at the extreme cell
    long long tuples = 0;   // variable tuples inspected
    bool exhaustive = false;
};

struct deviation_options {
    /// Enumerate every tuple while C(n, j) * 2^j stays within this.
    long long full_budget = 1000000;
    /// Otherwise inspect this many random tuples (seeded, with replacement).
    long long sample_tuples = 100000;
    std::uint64_t seed = 0;
};

/// Largest deviation of the sample frequencies from the uniform 2^-j, over
/// j-variable tuples and all bit patterns.  j must be in [1, 20].
deviation_result jwise_deviation(const sample_pack& pack, int j,
                                 const deviation_options& opts = {});
deviation_result jwise_deviation(std::span<const assignment> samples, int j,
                                 const deviation_options& opts = {});

/// The 2^(k-j)-clause formula over k variables whose smallest non-trivial
/// implicate is the all-positive clause on variables k-j+1, ..., k: each
/// clause adds one sign pattern of the auxiliary variables 1, ..., k-j.
/// Every variable occurs in all clauses, so L = 2^(k-j).
cnf implicate_formula(int k, int j);

enum class implicate_status {
    found,         // some non-tautological clause is entailed
    unsatisfiable, // the formula entails everything, even the empty clause
    none,          // every assignment satisfies the formula
};

struct implicate_result {
    implicate_status status = implicate_status::none;
    int size = 0; // smallest entailed clause size, when status == found
};

/// Exhaustive minimum implicate size (n <= 20): a clause on variables V is
/// entailed exactly when the satisfying set's projection onto V misses some
/// pattern, so the search walks subset sizes upward until a projection is
/// non-surjective.
implicate_result min_implicate_size(const cnf& f);

} // namespace lll
