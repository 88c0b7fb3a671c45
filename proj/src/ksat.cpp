#include "lll/ksat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lll/errors.hpp"

namespace lll {

int cnf::k_min() const {
    std::size_t k = 0;
    for (const auto& cl : clauses) k = (k == 0) ? cl.size() : std::min(k, cl.size());
    return static_cast<int>(k);
}

int cnf::max_occurrences() const {
    std::vector<int> occ(n, 0);
    int best = 0;
    for (const auto& cl : clauses)
        for (int lit : cl) best = std::max(best, ++occ[std::abs(lit) - 1]);
    return best;
}

bool cnf::satisfied_by(const assignment& x) const {
    for (const auto& cl : clauses) {
        bool sat = false;
        for (int lit : cl)
            if (x[std::abs(lit) - 1] == (lit > 0 ? 1 : 0)) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

// --- DIMACS ----------------------------------------------------------------

namespace {

int parse_dimacs_int(const std::string& tok, int line_no) {
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(tok, &used);
    } catch (const std::exception&) {
        throw parse_error("invalid token '" + tok + "'", line_no);
    }
    if (used != tok.size()) throw parse_error("invalid token '" + tok + "'", line_no);
    return value;
}

} // namespace

cnf load_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    int declared_clauses = -1; // -1 until the header has been seen
    cnf f;
    std::vector<int> current; // literals of the clause in progress
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream tokens(line);
        std::string tok;
        if (!(tokens >> tok)) continue; // blank line
        if (tok == "c" || tok[0] == 'c') continue;
        if (tok == "p") {
            if (declared_clauses >= 0) throw parse_error("duplicate header", line_no);
            std::string fmt;
            int n = 0, m = 0;
            if (!(tokens >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0)
                throw parse_error("malformed header (expected 'p cnf <n> <m>')", line_no);
            if (tokens >> tok) throw parse_error("trailing text after header", line_no);
            f.n = n;
            declared_clauses = m;
            continue;
        }
        if (declared_clauses < 0) throw parse_error("clause data before header", line_no);
        do {
            int lit = parse_dimacs_int(tok, line_no);
            if (lit == 0) {
                if (current.empty()) throw parse_error("empty clause", line_no);
                f.clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            int var = std::abs(lit);
            if (var > f.n) throw parse_error("variable out of range", line_no);
            for (int prev : current)
                if (std::abs(prev) == var)
                    throw duplicate_literal(
                        "clause mentions variable " + std::to_string(var) + " twice", line_no);
            current.push_back(lit);
        } while (tokens >> tok);
    }
    if (declared_clauses < 0) throw parse_error("missing header", std::max(line_no, 1));
    if (!current.empty()) throw parse_error("unterminated clause", line_no);
    if (f.clause_count() != declared_clauses)
        throw parse_error("header declares " + std::to_string(declared_clauses) +
                              " clauses, found " + std::to_string(f.clause_count()),
                          std::max(line_no, 1));
    return f;
}

// --- LLL instance ----------------------------------------------------------

ksat_instance cnf_to_instance(const cnf& f) {
    ksat_instance inst{var_space::uniform_bits(f.n), {}, true};
    inst.bad_events.reserve(f.clauses.size());
    for (const auto& cl : f.clauses) {
        std::vector<std::pair<int, int>> falsify;
        falsify.reserve(cl.size());
        for (int lit : cl) falsify.emplace_back(std::abs(lit) - 1, lit > 0 ? 0 : 1);
        inst.bad_events.push_back(scoped_event::conjunction(std::move(falsify)));
    }
    if (!f.clauses.empty()) {
        const int k = f.k_min();
        const double L = f.max_occurrences();
        inst.criterion_ok = L * k * std::numbers::e <= std::ldexp(1.0, k);
    }
    return inst;
}

double epsilon_bound(int k, int L) {
    if (k < 1 || L < 0) throw std::invalid_argument("epsilon_bound needs k >= 1 and L >= 0");
    if (L == 0) return 0.0;
    if (static_cast<double>(L) * k * std::numbers::e > std::ldexp(1.0, k))
        throw criterion_violated("occurrence bound exceeded: need L <= 2^k/(e k)");
    return std::numbers::e * L * std::ldexp(1.0, -k);
}

// --- deviation from uniform ------------------------------------------------

sample_pack::sample_pack(int n) : cols_(n >= 0 ? n : 0) {
    if (n < 0) throw std::invalid_argument("negative variable count");
}

void sample_pack::add(const assignment& x) {
    if (static_cast<int>(x.size()) != n())
        throw std::invalid_argument("sample has the wrong number of variables");
    const auto word = static_cast<std::size_t>(count_ / 64);
    const int bit = static_cast<int>(count_ % 64);
    for (std::size_t i = 0; i < cols_.size(); ++i) {
        if (x[i] != 0 && x[i] != 1) throw std::invalid_argument("sample values must be 0/1");
        if (bit == 0) cols_[i].push_back(0);
        cols_[i][word] |= std::uint64_t{static_cast<std::uint64_t>(x[i])} << bit;
    }
    ++count_;
}

namespace {

/// C(n, j), clamped to cap + 1 on overflow.
long long comb_clamped(int n, int j, long long cap) {
    long long c = 1;
    for (int t = 1; t <= j; ++t) {
        c = c * (n - j + t) / t; // exact: the partial products are binomials
        if (c > cap) return cap + 1;
    }
    return c;
}

/// Number of samples where every variable in `vars` whose mask bit is set
/// equals 1.  The trailing bits of the last word are zero in every column, so
/// no tail correction is needed.
long long and_popcount(const sample_pack& pack, std::span<const int> vars, unsigned mask) {
    std::vector<std::span<const std::uint64_t>> cols;
    for (std::size_t t = 0; t < vars.size(); ++t)
        if (mask >> t & 1u) cols.push_back(pack.column(vars[t]));
    long long total = 0;
    const std::size_t words = cols[0].size();
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t acc = cols[0][w];
        for (std::size_t c = 1; c < cols.size(); ++c) acc &= cols[c][w];
        total += std::popcount(acc);
    }
    return total;
}

} // namespace

deviation_result jwise_deviation(const sample_pack& pack, int j, const deviation_options& opts) {
    const int n = pack.n();
    const long long S = pack.count();
    if (j < 1 || j > 20) throw std::invalid_argument("j must be in [1, 20]");
    if (j > n) throw std::invalid_argument("j exceeds the variable count");
    if (S == 0) throw std::invalid_argument("no samples");

    std::vector<long long> ones(n);
    for (int i = 0; i < n; ++i) ones[i] = and_popcount(pack, std::span(&i, 1), 1u);

    // Pair counts save one popcount pass per tuple subset once j >= 3.
    std::vector<long long> pair_cnt;
    const bool use_pairs = j >= 3 && n <= 512;
    if (use_pairs) {
        pair_cnt.assign(static_cast<std::size_t>(n) * n, 0);
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                const int vars[2] = {a, b};
                pair_cnt[static_cast<std::size_t>(a) * n + b] = and_popcount(pack, vars, 3u);
            }
    }

    const long long cells = comb_clamped(n, j, opts.full_budget) << j;
    const bool exhaustive = cells <= opts.full_budget;

    deviation_result res;
    res.exhaustive = exhaustive;
    const double target = std::ldexp(1.0, -j);
    const unsigned full = (1u << j) - 1u;
    std::vector<long long> cnt(std::size_t{1} << j);
    double extreme_freq = target;

    auto scan_tuple = [&](std::span<const int> vars) {
        // cnt[mask]: samples with a 1 at every variable selected by mask.
        cnt[0] = S;
        for (int t = 0; t < j; ++t) cnt[std::size_t{1} << t] = ones[vars[t]];
        for (unsigned mask = 1; mask <= full; ++mask) {
            const int bits = std::popcount(mask);
            if (bits < 2) continue;
            if (bits == 2 && use_pairs) {
                const int a = vars[std::countr_zero(mask)];
                const int b = vars[31 - std::countl_zero(mask)];
                cnt[mask] = pair_cnt[static_cast<std::size_t>(std::min(a, b)) * n +
                                     std::max(a, b)];
            } else {
                cnt[mask] = and_popcount(pack, vars, mask);
            }
        }
        // Inclusion-exclusion over the zero positions turns the all-ones
        // counts into the count of each exact bit pattern.
        for (unsigned y = 0; y <= full; ++y) {
            const unsigned zeros = full & ~y;
            long long match = 0;
            for (unsigned s = zeros;; s = (s - 1) & zeros) {
                match += (std::popcount(s) % 2 == 0) ? cnt[y | s] : -cnt[y | s];
                if (s == 0) break;
            }
            const double freq = static_cast<double>(match) / static_cast<double>(S);
            const double dev = std::abs(freq - target);
            if (dev > res.deviation) {
                res.deviation = dev;
                extreme_freq = freq;
            }
        }
        ++res.tuples;
    };

    if (exhaustive) {
        std::vector<int> vars(j);
        for (int t = 0; t < j; ++t) vars[t] = t;
        while (true) {
            scan_tuple(vars);
            int t = j - 1;
            while (t >= 0 && vars[t] == n - j + t) --t;
            if (t < 0) break;
            ++vars[t];
            for (int u = t + 1; u < j; ++u) vars[u] = vars[u - 1] + 1;
        }
    } else {
        rng_stream rng = rng_stream(opts.seed).derive("jwise-tuples");
        std::vector<int> vars;
        for (long long trial = 0; trial < opts.sample_tuples; ++trial) {
            vars.clear();
            while (static_cast<int>(vars.size()) < j) {
                const int v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
                if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
            }
            std::sort(vars.begin(), vars.end());
            scan_tuple(vars);
        }
    }
    res.se = std::sqrt(std::max(extreme_freq * (1.0 - extreme_freq), 0.0) /
                       static_cast<double>(S));
    return res;
}

deviation_result jwise_deviation(std::span<const assignment> samples, int j,
                                 const deviation_options& opts) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    sample_pack pack(static_cast<int>(samples[0].size()));
    for (const assignment& x : samples) pack.add(x);
    return jwise_deviation(pack, j, opts);
}

// --- implicates ------------------------------------------------------------

cnf implicate_formula(int k, int j) {
    if (j < 1 || j > k) throw std::invalid_argument("need 1 <= j <= k");
    if (k - j > 20) throw budget_exceeded("too many auxiliary patterns to enumerate");
    cnf f;
    f.n = k;
    const unsigned patterns = 1u << (k - j);
    for (unsigned y = 0; y < patterns; ++y) {
        std::vector<int> clause;
        clause.reserve(k);
        // One literal per auxiliary variable, satisfied exactly on pattern y.
        for (int t = 0; t < k - j; ++t) clause.push_back((y >> t & 1u) ? t + 1 : -(t + 1));
        for (int v = k - j + 1; v <= k; ++v) clause.push_back(v);
        f.clauses.push_back(std::move(clause));
    }
    return f;
}

implicate_result min_implicate_size(const cnf& f) {
    if (f.n > 20) throw budget_exceeded("implicate search is exhaustive; needs n <= 20");
    if (f.n < 0) throw std::invalid_argument("negative variable count");

    std::vector<std::uint32_t> sat;
    assignment x(f.n, 0);
    const std::uint32_t total = std::uint32_t{1} << f.n;
    for (std::uint32_t a = 0; a < total; ++a) {
        for (int i = 0; i < f.n; ++i) x[i] = a >> i & 1u;
        if (f.satisfied_by(x)) sat.push_back(a);
    }
    if (sat.empty()) return {implicate_status::unsatisfiable, 0};
    if (sat.size() == total) return {implicate_status::none, 0};

    // A clause on variable set V is entailed exactly when some pattern never
    // appears in the satisfying set's projection onto V, so the smallest
    // implicate lives on the smallest non-surjective projection.
    std::vector<char> seen;
    for (int j = 1; j <= f.n; ++j) {
        const std::uint32_t want = std::uint32_t{1} << j;
        seen.assign(want, 0);
        std::vector<int> vars(j);
        for (int t = 0; t < j; ++t) vars[t] = t;
        while (true) {
            std::fill(seen.begin(), seen.end(), 0);
            std::uint32_t found = 0;
            for (std::uint32_t a : sat) {
                std::uint32_t proj = 0;
                for (int t = 0; t < j; ++t) proj |= (a >> vars[t] & 1u) << t;
                if (!seen[proj]) {
                    seen[proj] = 1;
                    if (++found == want) break;
                }
            }
            if (found < want) return {implicate_status::found, j};
            int t = j - 1;
            while (t >= 0 && vars[t] == f.n - j + t) --t;
            if (t < 0) break;
            ++vars[t];
            for (int u = t + 1; u < j; ++u) vars[u] = vars[u - 1] + 1;
        }
    }
    return {implicate_status::none, 0}; // unreachable: the full projection is short
}

} // namespace lll
