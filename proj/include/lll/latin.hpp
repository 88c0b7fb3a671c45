#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lll/events.hpp"
#include "lll/selection.hpp"

namespace lll {

/// Square matrix of integer color ids with optional nonnegative cell
/// weights (all ones when omitted).  Collects the per-color statistics the
/// transversal samplers need: occurrence counts and the maximum number of
/// cells sharing one color.
class color_matrix {
  public:
    explicit color_matrix(std::vector<std::vector<int>> colors,
                          std::vector<std::vector<double>> weights = {});

    /// Parses a matrix from comma-separated rows, one line per row, plus an
    /// optional weights file of the same shape.  Throws parse_error with a
    /// 1-based line number on malformed input.
    static color_matrix from_csv(const std::string& colors_csv,
                                 const std::string& weights_csv = "");

    int n() const { return n_; }
    int color(int x, int y) const;
    double weight(int x, int y) const;
    /// Sum of all n^2 cell weights.
    double total_weight() const { return total_weight_; }
    /// Largest number of cells sharing a single color.
    int max_multiplicity() const { return max_multiplicity_; }
    /// Occurrence count per color id.  Counts sum to n^2.
    const std::map<int, int>& color_counts() const { return counts_; }
    /// Cells of each color in row-major order.
    const std::map<int, std::vector<std::pair<int, int>>>& cells_by_color() const {
        return cells_;
    }

  private:
    int n_ = 0;
    std::vector<int> colors_;     // row-major
    std::vector<double> weights_; // row-major
    double total_weight_ = 0.0;
    int max_multiplicity_ = 0;
    std::map<int, int> counts_;
    std::map<int, std::vector<std::pair<int, int>>> cells_;
};

/// Color-collision bad events over permutations of [0, n): one atomic event
/// per unordered pair of same-colored cells in distinct rows and columns.
/// Pairs sharing a row or column can never both be selected, so they are
/// skipped and only counted.
struct latin_lll_instance {
    int n = 0;
    std::vector<atomic_perm_event> bad_events;
    int skipped_same_line = 0;
};

latin_lll_instance latin_instance(const color_matrix& m);

/// Uniform cluster weight 256/(81 n^2) certifying the color-collision
/// family whenever no color appears more than 27n/256 times.
double latin_alpha(int n);

struct weighted_transversal_result {
    /// Selected cells: row x picks cell (x, transversal(x)).  Distinct
    /// colors everywhere by construction.
    permutation transversal{0};
    /// Sum of the selected cells' weights.
    double weight = 0.0;
    /// Resampling steps used.
    long long steps = 0;
};

/// Samples a transversal with no repeated color by resampling color
/// collisions.  The expected weight is at most 5/3 w(A)/n when every color
/// appears at most 27n/256 times; that precondition is checked whenever
/// the matrix has any repeated color.
weighted_transversal_result weighted_transversal(const color_matrix& m, std::uint64_t seed,
                                                 select_rule rule = select_rule::lowest_index);

/// Largest admissible collision rate q for density parameter beta; requires
/// beta > 27/256.
double q_max(double beta);

/// Smallest positive root of gamma - (2q - q^2)(1 + beta*gamma)^4, found by
/// bisection to residual <= 1e-12.  Throws no_root when the polynomial has
/// no positive root, which signals q beyond the admissible range.
double gamma_root(double beta, double q);

/// Guaranteed partial-transversal density q - (e^{-(1-q)beta} - 1)/beta
///   - 2(1-q)^2 beta^2 gamma (1 + beta*gamma).
double f_value(double beta, double q);

/// max of f_value over q in [0, q_max(beta)]: coarse grid then
/// golden-section refinement.
double g_value(double beta);

/// The maximizing q behind g_value -- the collision rate the partial
/// sampler should run at to realize that density.
double q_star(double beta);

/// Bernoulli mark rate realizing an effective collision rate q at size n:
/// r = 1 - sqrt((n(q-1)^2 + 2q - 1)/(n - 1)).  Requires n >= 2, q in [0,1].
double mark_probability(int n, double q);

/// exp(-p*y_size/n): upper bound on the chance that a uniform permutation
/// of [0, n) selects none of a Bernoulli-p subselection of y_size cells.
double stein_avoidance_bound(double p, int y_size, int n);

/// One comparison row: the guarantee of the marked-resampling sampler next
/// to the closed forms for plain rejection of repeats and for subset
/// resampling.  Values are unrounded; presentation layers round to three
/// decimals.
struct table_row {
    double beta = 0.0;
    double bound = 0.0;           // g_value(beta)
    double pure_random = 0.0;     // (1 - e^{-beta})/beta
    double subset_resample = 0.0; // 1/2 + cbrt(27/(2048 beta))
};

/// Evaluates all three columns for each beta in (27/256, 1].
std::vector<table_row> reproduce_table(std::span<const double> betas);

struct partial_latin_result {
    /// Kept cells (x, y), ascending in x: for each color on the final
    /// permutation, the occurrence with the smallest row index.
    std::vector<std::pair<int, int>> kept;
    /// Deleted repeat count per color; only colors with at least one.
    std::map<int, int> removed;
    /// Cells selected by the initial permutation whose mark came up clear,
    /// grouped by color; only nonempty groups.
    std::map<int, std::vector<std::pair<int, int>>> initial_unmarked;
    permutation initial{0};
    permutation final{0};
    std::vector<char> initial_marks; // n*n row-major Bernoulli-r draws
    std::vector<char> final_marks;
    double q = 0.0;
    double r = 0.0; // mark rate derived from q
    long long steps = 0;
    int size = 0; // kept.size() = n - sum of removed counts
};

/// Runs the marked-collision resampler and deletes repeated colors from
/// the final permutation.  Feasibility of the mark rate is checked via the
/// cluster condition: some a >= 0 must satisfy
///   a >= ((2r - r^2)/(n(n-1))) (1 + n(D-1)a)^4,
/// which holds exactly when (2r - r^2)(D-1)/(n-1) <= 27/256 for maximum
/// color multiplicity D.
partial_latin_result partial_latin(const color_matrix& m, double q, std::uint64_t seed,
                                   select_rule rule = select_rule::lowest_index);

} // namespace lll
