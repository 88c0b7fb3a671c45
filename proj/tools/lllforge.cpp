// Command-line front end for the resampling toolkit: solve CNF instances,
// sample independent and Latin transversals, reproduce the partial-density
// comparison table, and check the library's probability bounds against Monte
// Carlo estimates.  Reports are JSON (CSV for the table) and byte-identical
// for identical configuration and seed.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lll/bounds.hpp"
#include "lll/depgraph.hpp"
#include "lll/errors.hpp"
#include "lll/estimate.hpp"
#include "lll/events.hpp"
#include "lll/experiments.hpp"
#include "lll/ksat.hpp"
#include "lll/latin.hpp"
#include "lll/mt.hpp"
#include "lll/table.hpp"
#include "lll/transversal.hpp"

namespace {

using nlohmann::json;

/// Flags shared by every subcommand.
struct common_options {
    std::uint64_t seed = 0;
    long long trials = 10000;
    double level = 0.95;
    int jobs = 1;
    long long max_steps = -1;
    std::string format = "json";
    std::string out;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lll::error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_report(const std::string& text, const common_options& common) {
    if (common.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(common.out, std::ios::binary);
    if (!file) throw lll::error("cannot write " + common.out);
    file << text;
}

/// Finalizes a JSON report: schema tag, stable key order (alphabetical), one
/// trailing newline.  Wall-clock data never goes in, so the bytes depend only
/// on the configuration and the seed.
void emit_json(json j, const common_options& common) {
    if (common.format != "json")
        throw lll::error("csv output is only available for table-shaped reports");
    j["schema"] = "1";
    write_report(j.dump(2) + "\n", common);
}

json estimate_json(const lll::estimate& est) {
    return json{{"successes", est.successes}, {"trials", est.trials},
                {"nonterminated", est.nonterminated}, {"p_hat", est.p_hat},
                {"ci_low", est.ci_low},             {"ci_high", est.ci_high},
                {"level", est.level}};
}

json verdict_json(const lll::verdict_result& v) {
    return json{{"violation", v.violation}, {"margin", v.margin}};
}

lll::estimate_options estimate_opts(const common_options& common) {
    lll::estimate_options opts;
    opts.level = common.level;
    opts.jobs = common.jobs;
    return opts;
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw lll::error("not a number: '" + text + "'");
    return value;
}

/// "LO:HI:STEP" (inclusive arithmetic range) or a single value.
std::vector<double> parse_range(const std::string& spec) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(spec);
    while (std::getline(in, item, ':')) parts.push_back(item);
    if (parts.size() == 1) return {parse_double(parts[0])};
    if (parts.size() != 3) throw lll::error("range must be VALUE or LO:HI:STEP");
    const double lo = parse_double(parts[0]);
    const double hi = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (step <= 0.0 || hi < lo) throw lll::error("range needs LO <= HI and STEP > 0");
    // Count first, then multiply out, so accumulation error cannot drop the
    // final endpoint.
    const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> values;
    for (long long i = 0; i <= count; ++i) values.push_back(lo + static_cast<double>(i) * step);
    return values;
}

double round_to(double v, double scale) { return std::round(v * scale) / scale; }

// --- ksat ------------------------------------------------------------------

int run_ksat_solve(const common_options& common, const std::string& dimacs_path) {
    const lll::cnf f = lll::load_dimacs(read_file(dimacs_path));
    const lll::ksat_instance inst = lll::cnf_to_instance(f);
    lll::resampling_table table(inst.space, common.seed);
    lll::mt_options opts;
    opts.max_steps = common.max_steps;
    const lll::run_result res = lll::run_mt(inst.space, inst.bad_events, table, opts);

    json report{{"command", "ksat solve"},
                {"input", dimacs_path},
                {"n", f.n},
                {"clauses", f.clause_count()},
                {"k", f.k_min()},
                {"occurrences", f.max_occurrences()},
                {"criterion_ok", inst.criterion_ok},
                {"seed", common.seed},
                {"steps", res.steps},
                {"terminated", res.terminated}};
    if (res.terminated) {
        report["assignment"] = res.final;
        report["satisfied"] = f.satisfied_by(res.final);
    }
    emit_json(std::move(report), common);
    return res.terminated ? 0 : 1;
}

int run_ksat_independence(const common_options& common, const std::string& dimacs_path,
                          int j) {
    const lll::cnf f = lll::load_dimacs(read_file(dimacs_path));
    const lll::ksat_instance inst = lll::cnf_to_instance(f);
    // Throws when the occurrence condition fails, since the deviation
    // guarantee is meaningless without it.
    const double epsilon = lll::epsilon_bound(f.k_min(), f.max_occurrences());

    lll::sample_pack pack(f.n);
    long long nonterminated = 0;
    for (long long i = 0; i < common.trials; ++i) {
        lll::rng_stream stream = lll::rng_stream(common.seed).derive("trial", i);
        lll::resampling_table table(inst.space, stream.next_u64());
        lll::mt_options opts;
        opts.max_steps = common.max_steps;
        const lll::run_result res = lll::run_mt(inst.space, inst.bad_events, table, opts);
        if (!res.terminated) {
            ++nonterminated;
            continue;
        }
        pack.add(res.final);
    }
    if (pack.count() == 0) throw lll::error("no run terminated within the step budget");

    lll::deviation_options dev_opts;
    dev_opts.seed = common.seed;
    const lll::deviation_result dev = lll::jwise_deviation(pack, j, dev_opts);
    // The guarantee allows a deviation of epsilon; four standard errors of
    // slack keep sampling noise from tripping the verdict.
    const double allowance = epsilon + 4.0 * dev.se;
    const bool violation = dev.deviation > allowance;

    json report{{"command", "ksat independence"},
                {"input", dimacs_path},
                {"n", f.n},
                {"clauses", f.clause_count()},
                {"j", j},
                {"epsilon", epsilon},
                {"deviation", dev.deviation},
                {"se", dev.se},
                {"tuples", dev.tuples},
                {"exhaustive", dev.exhaustive},
                {"samples", pack.count()},
                {"nonterminated", nonterminated},
                {"seed", common.seed},
                {"trials", common.trials},
                {"verdict", json{{"violation", violation}, {"margin", allowance - dev.deviation}}}};
    emit_json(std::move(report), common);
    return violation ? 1 : 0;
}

// --- transversal -----------------------------------------------------------

int run_transversal_avoid(const common_options& common, const std::string& path) {
    const lll::transversal_request req = lll::load_transversal_json(read_file(path));
    const lll::block_graph& g = req.graph;
    const int b = g.block_size();
    const int delta = g.max_degree();
    const int l = static_cast<int>(req.avoid.size());
    const lll::avoidance_result bound = lll::avoidance_bound(b, delta, l);

    const lll::transversal_instance inst = lll::to_lll_instance(g);
    const std::unordered_set<int> avoid(req.avoid.begin(), req.avoid.end());
    auto trial = [&](lll::rng_stream& rng, long long) {
        lll::resampling_table table(inst.space, rng.next_u64());
        lll::mt_options opts;
        opts.max_steps = common.max_steps;
        const lll::run_result res = lll::run_mt(inst.space, inst.bad_events, table, opts);
        bool hit = false;
        for (int v : lll::to_transversal(g, res.final))
            if (avoid.count(v) > 0) hit = true;
        return lll::trial_outcome{.event = hit, .terminated = res.terminated};
    };
    const lll::estimate est =
        lll::run_estimate(trial, common.trials, common.seed, estimate_opts(common));
    const lll::verdict_result v = lll::verdict(est, bound.bound);

    json report{{"command", "transversal avoid"},
                {"input", path},
                {"blocks", g.block_count()},
                {"block_size", b},
                {"max_degree", delta},
                {"avoid_size", l},
                {"bound", json{{"value", bound.bound},
                               {"ratio_form", bound.ratio_form},
                               {"exp_form", bound.exp_form},
                               {"large_regime", bound.large_regime},
                               {"used_exp_form", bound.used_exp_form}}},
                {"estimate", estimate_json(est)},
                {"seed", common.seed},
                {"verdict", verdict_json(v)}};
    emit_json(std::move(report), common);
    return v.violation ? 1 : 0;
}

int run_transversal_sample(const common_options& common, const std::string& path) {
    const lll::transversal_request req = lll::load_transversal_json(read_file(path));
    lll::avoid_options opts;
    opts.seed = common.seed;
    const lll::avoid_search_result res =
        lll::find_avoiding_transversal(req.graph, req.avoid, opts);
    json report{{"command", "transversal sample"},
                {"input", path},
                {"seed", common.seed},
                {"transversal", res.chosen},
                {"runs", res.runs},
                {"precondition_ok", res.precondition_ok}};
    emit_json(std::move(report), common);
    return 0;
}

// --- latin -----------------------------------------------------------------

int run_latin_table(const common_options& common, const std::string& beta_spec) {
    const std::vector<double> betas = parse_range(beta_spec);
    const std::vector<lll::table_row> rows = lll::reproduce_table(betas);

    if (common.format == "csv") {
        std::string text = "beta,bound,pure_random,subset_resample\n";
        char line[128];
        for (const lll::table_row& row : rows) {
            std::snprintf(line, sizeof line, "%g,%.3f,%.3f,%.3f\n", round_to(row.beta, 1e6),
                          row.bound, row.pure_random, row.subset_resample);
            text += line;
        }
        write_report(text, common);
        return 0;
    }

    json out_rows = json::array();
    for (const lll::table_row& row : rows)
        out_rows.push_back(json{{"beta", round_to(row.beta, 1e6)},
                                {"bound", round_to(row.bound, 1e3)},
                                {"pure_random", round_to(row.pure_random, 1e3)},
                                {"subset_resample", round_to(row.subset_resample, 1e3)}});
    emit_json(json{{"command", "latin table"}, {"rows", out_rows}}, common);
    return 0;
}

int run_latin_weighted(const common_options& common, const std::string& matrix_path,
                       const std::string& weights_path) {
    const lll::color_matrix m = lll::color_matrix::from_csv(
        read_file(matrix_path), weights_path.empty() ? "" : read_file(weights_path));

    double weight_sum = 0.0, weight_sq_sum = 0.0, step_sum = 0.0;
    lll::weighted_transversal_result last;
    for (long long i = 0; i < common.trials; ++i) {
        lll::rng_stream stream = lll::rng_stream(common.seed).derive("trial", i);
        last = lll::weighted_transversal(m, stream.next_u64());
        weight_sum += last.weight;
        weight_sq_sum += last.weight * last.weight;
        step_sum += static_cast<double>(last.steps);
    }
    const double t = static_cast<double>(common.trials);
    const double mean = weight_sum / t;
    const double variance =
        common.trials >= 2 ? std::max(0.0, (weight_sq_sum - t * mean * mean) / (t - 1.0)) : 0.0;
    const double se = std::sqrt(variance / t);
    const double bound = 5.0 / 3.0 * m.total_weight() / m.n();
    // Expected-value claim, so the verdict allows three standard errors.
    const bool violation = common.trials >= 2 && mean > bound + 3.0 * se;

    json report{{"command", "latin weighted"},
                {"input", matrix_path},
                {"n", m.n()},
                {"max_multiplicity", m.max_multiplicity()},
                {"total_weight", m.total_weight()},
                {"mean_weight", mean},
                {"se", se},
                {"mean_steps", step_sum / t},
                {"bound", bound},
                {"seed", common.seed},
                {"trials", common.trials},
                {"verdict", json{{"violation", violation}, {"margin", bound + 3.0 * se - mean}}}};
    if (common.trials == 1) {
        report["transversal"] = last.transversal.images();
        report["weight"] = last.weight;
    }
    emit_json(std::move(report), common);
    return violation ? 1 : 0;
}

int run_latin_partial(const common_options& common, const std::string& matrix_path,
                      double q, bool q_given) {
    const lll::color_matrix m = lll::color_matrix::from_csv(read_file(matrix_path));
    const int n = m.n();
    const double beta = static_cast<double>(m.max_multiplicity()) / n;
    if (!q_given) {
        if (beta <= 27.0 / 256.0)
            throw lll::error("matrix density is below 27/256; choose a rate with --q");
        q = lll::q_star(beta);
    }

    long long size_sum = 0;
    int min_size = n + 1, max_size = -1;
    double step_sum = 0.0, rate = 0.0;
    lll::partial_latin_result last;
    for (long long i = 0; i < common.trials; ++i) {
        lll::rng_stream stream = lll::rng_stream(common.seed).derive("trial", i);
        last = lll::partial_latin(m, q, stream.next_u64());
        size_sum += last.size;
        min_size = std::min(min_size, last.size);
        max_size = std::max(max_size, last.size);
        step_sum += static_cast<double>(last.steps);
        rate = last.r;
    }

    json report{{"command", "latin partial"},
                {"input", matrix_path},
                {"n", n},
                {"beta", beta},
                {"q", q},
                {"r", rate},
                {"mean_size", static_cast<double>(size_sum) / static_cast<double>(common.trials)},
                {"min_size", min_size},
                {"max_size", max_size},
                {"mean_steps", step_sum / static_cast<double>(common.trials)},
                {"seed", common.seed},
                {"trials", common.trials}};
    // The guaranteed density is asymptotic (an o(n) term is absorbed), so it
    // is reported for comparison rather than judged.
    try {
        const double density = lll::f_value(beta, q);
        report["density_guarantee"] = density;
        report["expected_size_guarantee"] = density * n;
    } catch (const lll::no_root&) {
        report["density_guarantee"] = nullptr;
    }
    if (common.trials == 1) {
        json kept = json::array();
        for (auto [x, y] : last.kept) kept.push_back(json::array({x, y}));
        report["kept"] = kept;
        json removed = json::array();
        for (auto [color, count] : last.removed) removed.push_back(json::array({color, count}));
        report["removed"] = removed;
        report["size"] = last.size;
    }
    emit_json(std::move(report), common);
    return 0;
}

// --- bounds ----------------------------------------------------------------

int run_bounds(const common_options& common, const std::string& dimacs_path, int var,
               int value, bool var_given) {
    const lll::cnf f = lll::load_dimacs(read_file(dimacs_path));
    const lll::ksat_instance inst = lll::cnf_to_instance(f);
    const lll::dep_graph g = lll::make_dep_graph(inst.space, inst.bad_events);
    const lll::symmetric_check_result sym = lll::symmetric_criterion(g);

    json report{{"command", "bounds"},
                {"input", dimacs_path},
                {"n", f.n},
                {"clauses", f.clause_count()},
                {"k", f.k_min()},
                {"occurrences", f.max_occurrences()},
                {"criterion_ok", inst.criterion_ok},
                {"epsilon", inst.criterion_ok
                                ? json(lll::epsilon_bound(f.k_min(), f.max_occurrences()))
                                : json()},
                {"symmetric", json{{"p", sym.p},
                                   {"d", sym.d},
                                   {"epd", sym.epd},
                                   {"satisfied", sym.satisfied}}},
                {"seed", common.seed}};
    if (sym.satisfied) {
        try {
            const lll::cluster_weights w = lll::symmetric_cluster_weights(g);
            const lll::cluster_check_result chk = lll::check_cluster_expansion(g, w);
            report["cluster"] =
                json{{"satisfied", chk.satisfied}, {"first_failure", chk.first_failure}};
        } catch (const lll::budget_exceeded&) {
            report["cluster"] = json{{"skipped", "enumeration budget exceeded"}};
        }
    }
    if (var_given) {
        if (var < 1 || var > f.n) throw lll::error("--var out of range");
        const lll::singleton_bound_result sb = lll::singleton_bound(
            inst.space, lll::scoped_event::equals(var - 1, value), inst.bad_events);
        report["theta"] = json{{"var", var},
                               {"value", value},
                               {"p", sb.p_a},
                               {"ordered_bound", sb.ordered_bound},
                               {"corollary_bound", sb.corollary_bound},
                               {"clique_size", static_cast<int>(sb.clique.size())}};
    }
    emit_json(std::move(report), common);
    return 0;
}

// --- verify ----------------------------------------------------------------

/// Built-in bound-consistency suite: small seeded instances of each
/// application, an estimated event probability per check, and a verdict
/// against the corresponding theoretical bound.
int run_verify(const common_options& common) {
    const lll::rng_stream master(common.seed);
    const lll::estimate_options eopts = estimate_opts(common);
    json checks = json::array();
    int violations = 0;

    auto add_check = [&](const std::string& name, const lll::estimate& est, double bound,
                         json extra) {
        const lll::verdict_result v = lll::verdict(est, bound);
        json entry{{"name", name},
                   {"bound", bound},
                   {"estimate", estimate_json(est)},
                   {"verdict", verdict_json(v)}};
        entry.update(extra);
        checks.push_back(std::move(entry));
        if (v.violation) ++violations;
    };

    // Shared CNF fixture: subcritical, so every run terminates quickly.
    const lll::cnf f =
        lll::random_ksat(30, 10, 5, 2, master.derive("suite-instance", 0).next_u64());
    const lll::ksat_instance ksat = lll::cnf_to_instance(f);

    {
        // Output-distribution bound: the first clause one literal short of
        // violation is strictly rarer in outputs than under fresh coins, and
        // the distortion bound must still sit above the truth.
        std::vector<std::pair<int, int>> falsify;
        for (std::size_t t = 0; t + 1 < f.clauses[0].size(); ++t) {
            const int lit = f.clauses[0][t];
            falsify.emplace_back(std::abs(lit) - 1, lit > 0 ? 0 : 1);
        }
        const lll::scoped_event target = lll::scoped_event::conjunction(falsify);
        const lll::disjunction_bound_result db =
            lll::disjunction_bound(ksat.space, std::span(&target, 1), ksat.bad_events);
        const double bound = std::min(1.0, db.ordered_bound);
        auto trial = [&](lll::rng_stream& rng, long long) {
            lll::resampling_table table(ksat.space, rng.next_u64());
            lll::mt_options opts;
            opts.max_steps = common.max_steps;
            const lll::run_result res = lll::run_mt(ksat.space, ksat.bad_events, table, opts);
            return lll::trial_outcome{.event = target.holds(res.final),
                                      .terminated = res.terminated};
        };
        const lll::estimate est = lll::run_estimate(
            trial, common.trials, master.derive("suite-run", 0).next_u64(), eopts);
        add_check("ksat-theta", est, bound, json{{"psi", db.psi[0]}});
    }

    {
        // j-wise uniformity of sampled solutions against the independence
        // defect, with four standard errors of slack.
        const double epsilon = lll::epsilon_bound(f.k_min(), f.max_occurrences());
        lll::sample_pack pack(f.n);
        const std::uint64_t run_seed = master.derive("suite-run", 1).next_u64();
        for (long long i = 0; i < common.trials; ++i) {
            lll::rng_stream stream = lll::rng_stream(run_seed).derive("trial", i);
            lll::resampling_table table(ksat.space, stream.next_u64());
            lll::mt_options opts;
            opts.max_steps = common.max_steps;
            const lll::run_result res = lll::run_mt(ksat.space, ksat.bad_events, table, opts);
            if (res.terminated) pack.add(res.final);
        }
        lll::deviation_options dev_opts;
        dev_opts.seed = run_seed;
        const lll::deviation_result dev = lll::jwise_deviation(pack, 2, dev_opts);
        const double allowance = epsilon + 4.0 * dev.se;
        const bool violation = dev.deviation > allowance;
        checks.push_back(json{{"name", "ksat-independence"},
                              {"epsilon", epsilon},
                              {"deviation", dev.deviation},
                              {"se", dev.se},
                              {"samples", pack.count()},
                              {"verdict", json{{"violation", violation},
                                               {"margin", allowance - dev.deviation}}}});
        if (violation) ++violations;
    }

    {
        // Avoidance probability of the independent-transversal sampler
        // against the closed-form bound.
        const lll::block_graph g = lll::random_block_graph(
            6, 10, 2, 400, master.derive("suite-instance", 2).next_u64());
        const std::vector<int> avoid = {g.blocks()[0][0], g.blocks()[1][1], g.blocks()[2][2]};
        const lll::avoidance_result bound =
            lll::avoidance_bound(g.block_size(), g.max_degree(), static_cast<int>(avoid.size()));
        const lll::transversal_instance inst = lll::to_lll_instance(g);
        const std::unordered_set<int> avoid_set(avoid.begin(), avoid.end());
        auto trial = [&](lll::rng_stream& rng, long long) {
            lll::resampling_table table(inst.space, rng.next_u64());
            lll::mt_options opts;
            opts.max_steps = common.max_steps;
            const lll::run_result res = lll::run_mt(inst.space, inst.bad_events, table, opts);
            bool hit = false;
            for (int v : lll::to_transversal(g, res.final))
                if (avoid_set.count(v) > 0) hit = true;
            return lll::trial_outcome{.event = hit, .terminated = res.terminated};
        };
        const lll::estimate est = lll::run_estimate(
            trial, common.trials, master.derive("suite-run", 2).next_u64(), eopts);
        add_check("transversal-avoidance", est, bound.bound,
                  json{{"block_size", g.block_size()}, {"max_degree", g.max_degree()}});
    }

    {
        // Per-cell selection probability of the colorful-transversal sampler
        // against 5/(3n).
        const int n = 19;
        const lll::color_matrix m =
            lll::balanced_color_matrix(n, 2, master.derive("suite-instance", 3).next_u64());
        const double bound = 5.0 / (3.0 * n);
        auto trial = [&](lll::rng_stream& rng, long long) {
            try {
                const lll::weighted_transversal_result res =
                    lll::weighted_transversal(m, rng.next_u64());
                return lll::trial_outcome{.event = res.transversal(0) == 0};
            } catch (const lll::budget_exceeded&) {
                return lll::trial_outcome{.event = false, .terminated = false};
            }
        };
        const lll::estimate est = lll::run_estimate(
            trial, common.trials, master.derive("suite-run", 3).next_u64(), eopts);
        add_check("latin-cell", est, bound, json{{"n", n}});
    }

    {
        // Avoidance of a random marked cell set by a uniform permutation
        // against the negative-association bound.
        const int n = 10, y_size = 30;
        const double p = 0.5;
        lll::rng_stream cell_rng = master.derive("suite-instance", 4);
        const lll::permutation shuffle = lll::permutation::random(n * n, cell_rng);
        std::vector<std::pair<int, int>> y;
        for (int t = 0; t < y_size; ++t) y.emplace_back(shuffle(t) / n, shuffle(t) % n);
        const double bound = lll::stein_avoidance_bound(p, y_size, n);
        auto trial = [&](lll::rng_stream& rng, long long) {
            const lll::permutation pi = lll::permutation::random(n, rng);
            bool avoided = true;
            for (auto [x, yv] : y)
                if (pi(x) == yv && rng.next_bernoulli(p)) avoided = false;
            return lll::trial_outcome{.event = avoided};
        };
        const lll::estimate est = lll::run_estimate(
            trial, common.trials, master.derive("suite-run", 4).next_u64(), eopts);
        add_check("stein-avoidance", est, bound, json{{"n", n}, {"y_size", y_size}, {"p", p}});
    }

    json report{{"command", "verify"}, {"suite", "core"},
                {"seed", common.seed},  {"trials", common.trials},
                {"level", common.level}, {"checks", checks},
                {"violations", violations}};
    emit_json(std::move(report), common);
    return violations > 0 ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resampling-algorithm toolkit: solvers, samplers, and bound checks"};
    app.require_subcommand(1);

    common_options common;
    app.add_option("--seed", common.seed, "Master seed (also env LLLFORGE_SEED)")
        ->envname("LLLFORGE_SEED");
    app.add_option("--trials", common.trials, "Monte Carlo trials")
        ->check(CLI::PositiveNumber);
    app.add_option("--level", common.level, "Confidence level, 0.95 or 0.99");
    app.add_option("--jobs", common.jobs, "Worker threads for estimates")
        ->check(CLI::Range(1, 64));
    app.add_option("--max-steps", common.max_steps,
                   "Resampling-step budget (-1: derive from the instance)");
    app.add_option("--format", common.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", common.out, "Write the report to this file instead of stdout");

    CLI::App* ksat = app.add_subcommand("ksat", "CNF solving and output-distribution checks");
    ksat->fallthrough();
    ksat->require_subcommand(1);
    std::string solve_dimacs;
    CLI::App* ksat_solve = ksat->add_subcommand("solve", "Run the resampling solver once");
    ksat_solve->fallthrough();
    ksat_solve->add_option("--dimacs", solve_dimacs, "CNF file in DIMACS format")->required();
    std::string indep_dimacs;
    int indep_j = 2;
    CLI::App* ksat_indep = ksat->add_subcommand(
        "independence", "Estimate the j-wise deviation of sampled solutions");
    ksat_indep->fallthrough();
    ksat_indep->add_option("--dimacs", indep_dimacs, "CNF file in DIMACS format")->required();
    ksat_indep->add_option("--j", indep_j, "Tuple size")->check(CLI::Range(1, 20));

    CLI::App* transversal =
        app.add_subcommand("transversal", "Independent transversals of block graphs");
    transversal->fallthrough();
    transversal->require_subcommand(1);
    std::string avoid_instance;
    CLI::App* trans_avoid = transversal->add_subcommand(
        "avoid", "Estimate the avoid-set hit probability against its bound");
    trans_avoid->fallthrough();
    trans_avoid->add_option("--instance", avoid_instance, "Instance JSON file")->required();
    std::string sample_instance;
    CLI::App* trans_sample = transversal->add_subcommand(
        "sample", "Search for an independent transversal avoiding the given set");
    trans_sample->fallthrough();
    trans_sample->add_option("--instance", sample_instance, "Instance JSON file")->required();

    CLI::App* latin = app.add_subcommand("latin", "Latin-transversal samplers and tables");
    latin->fallthrough();
    latin->require_subcommand(1);
    std::string beta_spec;
    CLI::App* latin_table =
        latin->add_subcommand("table", "Guaranteed-density comparison table");
    latin_table->fallthrough();
    latin_table->add_option("--beta", beta_spec, "Density value or range LO:HI:STEP")
        ->required();
    std::string weighted_matrix, weighted_weights;
    CLI::App* latin_weighted =
        latin->add_subcommand("weighted", "Sample colorful transversals of a color matrix");
    latin_weighted->fallthrough();
    latin_weighted->add_option("--matrix", weighted_matrix, "Color matrix CSV file")
        ->required();
    latin_weighted->add_option("--weights", weighted_weights, "Cell weight CSV file");
    std::string partial_matrix;
    double partial_q = 0.0;
    CLI::App* latin_partial = latin->add_subcommand(
        "partial", "Sample partial transversals via marked-collision resampling");
    latin_partial->fallthrough();
    latin_partial->add_option("--matrix", partial_matrix, "Color matrix CSV file")->required();
    CLI::Option* q_opt = latin_partial->add_option(
        "--q", partial_q, "Collision rate (default: the density maximizer)");

    std::string bounds_dimacs;
    int bounds_var = 0, bounds_value = 1;
    CLI::App* bounds = app.add_subcommand("bounds", "Criteria and bounds for a CNF instance");
    bounds->fallthrough();
    bounds->add_option("--dimacs", bounds_dimacs, "CNF file in DIMACS format")->required();
    CLI::Option* var_opt =
        bounds->add_option("--var", bounds_var, "Variable (1-based) for a value-probability bound");
    bounds->add_option("--value", bounds_value, "Value for --var")->check(CLI::Range(0, 1));

    std::string suite = "core";
    CLI::App* verify = app.add_subcommand("verify", "Built-in bound-consistency suite");
    verify->fallthrough();
    verify->add_option("--suite", suite, "Suite name")->check(CLI::IsMember({"core"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (common.level != 0.95 && common.level != 0.99)
            throw lll::error("--level must be 0.95 or 0.99");
        if (ksat_solve->parsed()) return run_ksat_solve(common, solve_dimacs);
        if (ksat_indep->parsed()) return run_ksat_independence(common, indep_dimacs, indep_j);
        if (trans_avoid->parsed()) return run_transversal_avoid(common, avoid_instance);
        if (trans_sample->parsed()) return run_transversal_sample(common, sample_instance);
        if (latin_table->parsed()) return run_latin_table(common, beta_spec);
        if (latin_weighted->parsed())
            return run_latin_weighted(common, weighted_matrix, weighted_weights);
        if (latin_partial->parsed())
            return run_latin_partial(common, partial_matrix, partial_q, q_opt->count() > 0);
        if (bounds->parsed())
            return run_bounds(common, bounds_dimacs, bounds_var, bounds_value,
                              var_opt->count() > 0);
        if (verify->parsed()) return run_verify(common);
    } catch (const lll::parse_error& e) {
        std::cerr << "error: " << e.what() << " (line " << e.line << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
