#include "lll/latin.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "lll/errors.hpp"
#include "lll/rng.hpp"
#include "lll/swapping.hpp"

namespace lll {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_cell(std::string_view token, int line) {
    const std::string_view t = trim(token);
    if (t.empty()) throw parse_error("empty cell", line);
    T value{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw parse_error("malformed number '" + std::string(t) + "'", line);
    return value;
}

template <typename T>
std::vector<std::vector<T>> parse_csv(const std::string& text) {
    std::vector<std::vector<T>> rows;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (trim(raw).empty()) throw parse_error("blank row", line);
        std::vector<T> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = raw.find(',', start);
            const std::size_t stop = comma == std::string::npos ? raw.size() : comma;
            row.push_back(parse_cell<T>(std::string_view(raw).substr(start, stop - start), line));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw parse_error("row has " + std::to_string(row.size()) + " cells, expected " +
                                  std::to_string(rows.front().size()),
                              line);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw parse_error("empty matrix", 1);
    return rows;
}

} // namespace

color_matrix::color_matrix(std::vector<std::vector<int>> colors,
                           std::vector<std::vector<double>> weights) {
    n_ = static_cast<int>(colors.size());
    if (n_ == 0) throw std::invalid_argument("color matrix must be nonempty");
    for (const auto& row : colors)
        if (static_cast<int>(row.size()) != n_)
            throw std::invalid_argument("color matrix must be square");
    if (!weights.empty()) {
        if (static_cast<int>(weights.size()) != n_)
            throw std::invalid_argument("weights must match the color matrix shape");
        for (const auto& row : weights) {
            if (static_cast<int>(row.size()) != n_)
                throw std::invalid_argument("weights must match the color matrix shape");
            for (double w : row)
                if (!std::isfinite(w) || w < 0.0)
                    throw std::invalid_argument("cell weights must be finite and nonnegative");
        }
    }

    colors_.reserve(static_cast<std::size_t>(n_) * n_);
    weights_.reserve(static_cast<std::size_t>(n_) * n_);
    for (int x = 0; x < n_; ++x)
        for (int y = 0; y < n_; ++y) {
            const int c = colors[x][y];
            colors_.push_back(c);
            ++counts_[c];
            cells_[c].push_back({x, y});
            const double w = weights.empty() ? 1.0 : weights[x][y];
            weights_.push_back(w);
            total_weight_ += w;
        }
    for (const auto& [c, count] : counts_) max_multiplicity_ = std::max(max_multiplicity_, count);
}

color_matrix color_matrix::from_csv(const std::string& colors_csv, const std::string& weights_csv) {
    std::vector<std::vector<int>> colors = parse_csv<int>(colors_csv);
    if (colors.size() != colors.front().size())
        throw parse_error("matrix has " + std::to_string(colors.size()) + " rows of " +
                              std::to_string(colors.front().size()) + " columns, expected square",
                          static_cast<int>(colors.size()));
    std::vector<std::vector<double>> weights;
    if (!weights_csv.empty()) {
        weights = parse_csv<double>(weights_csv);
        if (weights.size() != colors.size() || weights.front().size() != colors.front().size())
            throw parse_error("weights shape does not match the color matrix",
                              static_cast<int>(weights.size()));
        for (std::size_t x = 0; x < weights.size(); ++x)
            for (double w : weights[x])
                if (!std::isfinite(w) || w < 0.0)
                    throw parse_error("cell weights must be finite and nonnegative",
                                      static_cast<int>(x) + 1);
    }
    return color_matrix(std::move(colors), std::move(weights));
}

int color_matrix::color(int x, int y) const {
    if (x < 0 || x >= n_ || y < 0 || y >= n_) throw std::out_of_range("cell index out of range");
    return colors_[static_cast<std::size_t>(x) * n_ + y];
}

double color_matrix::weight(int x, int y) const {
    if (x < 0 || x >= n_ || y < 0 || y >= n_) throw std::out_of_range("cell index out of range");
    return weights_[static_cast<std::size_t>(x) * n_ + y];
}

latin_lll_instance latin_instance(const color_matrix& m) {
    latin_lll_instance out;
    out.n = m.n();
    for (const auto& [color, cells] : m.cells_by_color())
        for (std::size_t i = 0; i < cells.size(); ++i)
            for (std::size_t j = i + 1; j < cells.size(); ++j) {
                // Two cells on a shared row or column can never both be
                // selected, so the pair carries probability zero.
                if (cells[i].first == cells[j].first || cells[i].second == cells[j].second) {
                    ++out.skipped_same_line;
                    continue;
                }
                out.bad_events.push_back(atomic_perm_event({cells[i], cells[j]}));
            }
    return out;
}

double latin_alpha(int n) {
    if (n < 1) throw std::invalid_argument("matrix size must be positive");
    return 256.0 / (81.0 * n * n);
}

weighted_transversal_result weighted_transversal(const color_matrix& m, std::uint64_t seed,
                                                 select_rule rule) {
    const int n = m.n();
    const int delta = m.max_multiplicity();
    // With every color unique there is nothing to resample and any
    // permutation works, so the density condition only binds at delta >= 2.
    if (delta >= 2 && 256LL * delta > 27LL * n)
        throw supercritical_colors("a color appears more than 27n/256 times");

    const latin_lll_instance fam = latin_instance(m);
    swap_instance inst;
    inst.n = n;
    inst.events.reserve(fam.bad_events.size());
    for (const auto& e : fam.bad_events) inst.events.push_back({e, false});
    swap_options opts;
    opts.rule = rule;
    const swap_run_result run = run_swapping(inst, seed, opts);
    if (!run.terminated) throw budget_exceeded("collision resampling budget exhausted");

    weighted_transversal_result out{run.final, 0.0, run.steps};
    for (int x = 0; x < n; ++x) out.weight += m.weight(x, out.transversal(x));
    return out;
}

double q_max(double beta) {
    if (!std::isfinite(beta) || beta <= 27.0 / 256.0)
        throw out_of_range_error("density parameter must exceed 27/256");
    return 1.0 - std::sqrt(1.0 - (27.0 / 256.0) / beta);
}

double gamma_root(double beta, double q) {
    if (!std::isfinite(beta) || beta <= 0.0)
        throw std::invalid_argument("density parameter must be positive");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("collision rate must lie in [0, 1]");
    const double c = 2.0 * q - q * q;
    if (c == 0.0) return 0.0;
    const auto h = [&](double g) {
        const double base = 1.0 + beta * g;
        const double sq = base * base;
        return g - c * sq * sq;
    };
    // h rises from h(0) = -c to its maximum at the stationary point g_p and
    // falls beyond it, so a positive root at or below g_p exists exactly
    // when h(g_p) >= 0 -- and that root is the smallest one.
    const double g_p = (std::cbrt(1.0 / (4.0 * beta * c)) - 1.0) / beta;
    if (g_p <= 0.0) throw no_root("collision rate too large for this density");
    const double peak = h(g_p);
    if (peak < 0.0) {
        // Allow a double root that rounding pushed marginally below zero.
        if (peak > -1e-9) return g_p;
        throw no_root("collision rate too large for this density");
    }
    double lo = 0.0, hi = g_p;
    while (hi - lo > 1e-15 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

double f_value(double beta, double q) {
    const double g = gamma_root(beta, q);
    return q - (std::exp(-(1.0 - q) * beta) - 1.0) / beta -
           2.0 * (1.0 - q) * (1.0 - q) * beta * beta * g * (1.0 + beta * g);
}

namespace {

/// Shared maximizer behind g_value and q_star: coarse grid, then
/// golden-section refinement inside the winning cell's neighbours.
std::pair<double, double> maximize_f(double beta) {
    const double qm = q_max(beta);
    constexpr int kGrid = 256;
    double best = f_value(beta, 0.0);
    double best_q = 0.0;
    for (int i = 1; i <= kGrid; ++i) {
        const double q = qm * i / kGrid;
        const double v = f_value(beta, q);
        if (v > best) {
            best = v;
            best_q = q;
        }
    }
    const double step = qm / kGrid;
    double a = std::max(0.0, best_q - step);
    double b = std::min(qm, best_q + step);
    constexpr double kRatio = 0.6180339887498949;
    double x1 = b - kRatio * (b - a);
    double x2 = a + kRatio * (b - a);
    double f1 = f_value(beta, x1);
    double f2 = f_value(beta, x2);
    while (b - a > 1e-10) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kRatio * (b - a);
            f2 = f_value(beta, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kRatio * (b - a);
            f1 = f_value(beta, x1);
        }
    }
    std::pair<double, double> top(best_q, best);
    if (f1 > top.second) top = {x1, f1};
    if (f2 > top.second) top = {x2, f2};
    return top;
}

} // namespace

double g_value(double beta) { return maximize_f(beta).second; }

double q_star(double beta) { return maximize_f(beta).first; }

double mark_probability(int n, double q) {
    if (n < 2) throw std::invalid_argument("mark rate needs at least two rows");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("collision rate must lie in [0, 1]");
    const double inner = (n * (q - 1.0) * (q - 1.0) + 2.0 * q - 1.0) / (n - 1.0);
    return 1.0 - std::sqrt(inner);
}

double stein_avoidance_bound(double p, int y_size, int n) {
    if (n < 1) throw std::invalid_argument("permutation size must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mark rate must lie in [0, 1]");
    if (y_size < 0 || static_cast<long long>(y_size) > static_cast<long long>(n) * n)
        throw std::invalid_argument("cell set larger than the matrix");
    return std::exp(-p * y_size / n);
}

std::vector<table_row> reproduce_table(std::span<const double> betas) {
    std::vector<table_row> rows;
    rows.reserve(betas.size());
    for (double beta : betas) {
        if (!std::isfinite(beta) || beta <= 27.0 / 256.0 || beta > 1.0)
            throw out_of_range_error("density parameter must lie in (27/256, 1]");
        table_row row;
        row.beta = beta;
        row.bound = g_value(beta);
        row.pure_random = (1.0 - std::exp(-beta)) / beta;
        row.subset_resample = 0.5 + std::cbrt(27.0 / (2048.0 * beta));
        rows.push_back(row);
    }
    return rows;
}

partial_latin_result partial_latin(const color_matrix& m, double q, std::uint64_t seed,
                                   select_rule rule) {
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("collision rate must lie in [0, 1]");
    const int n = m.n();
    partial_latin_result out;
    out.q = q;
    if (n == 1) {
        // A single cell can never collide and needs no marks.
        out.kept = {{0, 0}};
        out.initial = permutation(1);
        out.final = out.initial;
        out.initial_marks.assign(1, 0);
        out.final_marks = out.initial_marks;
        out.initial_unmarked[m.color(0, 0)] = {{0, 0}};
        out.size = 1;
        return out;
    }

    const double r = mark_probability(n, q);
    out.r = r;
    const int delta = m.max_multiplicity();
    if (delta >= 2) {
        // Existence of a cluster weight (see the header) reduces to this
        // closed-form threshold; the tiny slack absorbs rounding in r.
        const double reach = (2.0 * r - r * r) * (delta - 1) / (n - 1);
        if (reach > 27.0 / 256.0 * (1.0 + 1e-12))
            throw supercritical_colors("mark rate too aggressive for this color density");
    }

    const latin_lll_instance fam = latin_instance(m);
    swap_instance inst;
    inst.n = n;
    inst.mark_prob = r;
    inst.events.reserve(fam.bad_events.size());
    for (const auto& e : fam.bad_events) inst.events.push_back({e, true});
    swap_options opts;
    opts.rule = rule;
    const swap_run_result run = run_swapping(inst, seed, opts);
    if (!run.terminated) throw budget_exceeded("collision resampling budget exhausted");

    // A zero-budget replay of the same seed stops at the initial
    // configuration, which the removal accounting needs.
    swap_options replay = opts;
    replay.max_steps = 0;
    const swap_run_result start = run_swapping(inst, seed, replay);
    out.initial = start.final;
    out.final = run.final;
    out.steps = run.steps;
    if (!run.final_marks.empty()) {
        out.initial_marks = start.final_marks;
        out.final_marks = run.final_marks;
    } else {
        // No two cells share a color, so the resampler never allocated the
        // mark field; draw it once for a complete report.  Nothing was
        // resampled, so the initial and final fields coincide.
        rng_stream mark_rng = rng_stream(seed).derive("latin-marks");
        out.initial_marks.assign(static_cast<std::size_t>(n) * n, 0);
        for (auto& cell : out.initial_marks) cell = mark_rng.next_bernoulli(r);
        out.final_marks = out.initial_marks;
    }

    for (int x = 0; x < n; ++x) {
        const int y = out.initial(x);
        if (!out.initial_marks[static_cast<std::size_t>(x) * n + y])
            out.initial_unmarked[m.color(x, y)].push_back({x, y});
    }

    // Keep the smallest-row occurrence of every color on the final
    // permutation and count the deleted repeats.
    std::set<int> seen;
    for (int x = 0; x < n; ++x) {
        const int y = out.final(x);
        const int color = m.color(x, y);
        if (seen.insert(color).second)
            out.kept.push_back({x, y});
        else
            ++out.removed[color];
    }
    out.size = static_cast<int>(out.kept.size());
    return out;
}

} // namespace lll
