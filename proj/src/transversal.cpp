#include "lll/transversal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "lll/errors.hpp"
#include "lll/mt.hpp"
#include "lll/table.hpp"

namespace lll {

block_graph::block_graph(std::vector<std::vector<int>> blocks,
                         std::vector<std::pair<int, int>> edges)
    : blocks_(std::move(blocks)), edges_(std::move(edges)) {
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (blocks_[i].size() != blocks_[0].size())
            throw std::invalid_argument("blocks must all have the same size");
        for (std::size_t off = 0; off < blocks_[i].size(); ++off) {
            const int v = blocks_[i][off];
            if (v < 0) throw std::invalid_argument("negative vertex id");
            if (!where_.emplace(v, std::pair{static_cast<int>(i), static_cast<int>(off)})
                     .second)
                throw std::invalid_argument("vertex " + std::to_string(v) +
                                            " appears in two blocks");
        }
    }
    std::unordered_map<int, int> degree;
    std::set<std::pair<int, int>> seen;
    for (auto& [u, v] : edges_) {
        if (u == v) throw std::invalid_argument("self-loop on vertex " + std::to_string(u));
        if (!has_vertex(u) || !has_vertex(v))
            throw std::invalid_argument("edge endpoint outside every block");
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second)
            throw std::invalid_argument("duplicate edge");
        max_degree_ = std::max({max_degree_, ++degree[u], ++degree[v]});
    }
}

std::pair<int, int> block_graph::locate(int v) const {
    const auto it = where_.find(v);
    if (it == where_.end())
        throw std::out_of_range("unknown vertex id " + std::to_string(v));
    return it->second;
}

bool is_transversal(const block_graph& g, const transversal& t) {
    if (static_cast<int>(t.size()) != g.block_count()) return false;
    for (int i = 0; i < g.block_count(); ++i)
        if (!g.has_vertex(t[i]) || g.block_of(t[i]) != i) return false;
    return true;
}

bool is_independent_transversal(const block_graph& g, const transversal& t) {
    if (!is_transversal(g, t)) return false;
    const std::set<int> chosen(t.begin(), t.end());
    for (auto [u, v] : g.edges())
        if (chosen.count(u) && chosen.count(v)) return false;
    return true;
}

transversal_instance to_lll_instance(const block_graph& g) {
    if (g.block_size() < 1) throw std::invalid_argument("blocks must be non-empty");
    transversal_instance inst{var_space::uniform(g.block_count(), g.block_size()), {}, {}, 0};
    for (auto [u, v] : g.edges()) {
        const auto [bu, ou] = g.locate(u);
        const auto [bv, ov] = g.locate(v);
        if (bu == bv) {
            ++inst.dropped_intra_block;
            continue;
        }
        inst.bad_events.push_back(scoped_event::conjunction({{bu, ou}, {bv, ov}}));
        inst.event_edges.push_back({u, v});
    }
    return inst;
}

transversal to_transversal(const block_graph& g, const assignment& x) {
    if (static_cast<int>(x.size()) != g.block_count())
        throw std::invalid_argument("assignment size does not match block count");
    transversal t(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || x[i] >= g.block_size())
            throw std::invalid_argument("value outside the block");
        t[i] = g.blocks()[i][x[i]];
    }
    return t;
}

double alpha_cluster(int b, int delta) {
    if (b < 1 || delta < 1) throw std::invalid_argument("need b >= 1 and delta >= 1");
    if (b < 4 * delta)
        throw subcritical_block_size("cluster weight needs b >= 4 * delta");
    const double bd = b, dd = delta;
    return (bd - std::sqrt(bd * (bd - 4.0 * dd)) - 2.0 * dd) / (2.0 * bd * dd * dd);
}

avoidance_result avoidance_bound(int b, int delta, int l) {
    if (b < 1 || delta < 1 || l < 0)
        throw std::invalid_argument("need b >= 1, delta >= 1, l >= 0");
    if (b < 4 * delta)
        throw subcritical_block_size("avoidance bound needs b >= 4 * delta");
    if (l >= b) throw out_of_range_error("avoidance bound is vacuous at |L| >= b");
    const double bd = b, ld = l;
    const double root = std::sqrt(1.0 - 4.0 * delta / bd);
    avoidance_result res;
    res.ratio_form = 2.0 * ld / ((bd + ld) + (bd - ld) * root);
    res.exp_form = 2.0 * (1.0 - std::exp(-ld / bd)) / (1.0 + root);
    res.large_regime = 2.0 * b >= 9 * delta;
    if (res.large_regime) {
        res.bound = res.ratio_form;
    } else {
        res.used_exp_form = res.exp_form > res.ratio_form;
        res.bound = std::max(res.ratio_form, res.exp_form);
    }
    return res;
}

avoid_search_result find_avoiding_transversal(const block_graph& g,
                                              const std::vector<int>& avoid,
                                              const avoid_options& opts) {
    std::set<int> banned;
    for (int v : avoid) {
        (void)g.locate(v); // validates the id
        if (!banned.insert(v).second)
            throw std::invalid_argument("duplicate vertex in avoid set");
    }
    for (const auto& block : g.blocks()) {
        if (std::all_of(block.begin(), block.end(),
                        [&](int v) { return banned.count(v) > 0; }))
            throw out_of_range_error("avoid set covers a whole block");
    }

    const transversal_instance inst = to_lll_instance(g);
    const double threshold =
        std::numbers::e * std::numbers::e / (std::numbers::e - 1.0) * g.max_degree();
    avoid_search_result out;
    out.precondition_ok = static_cast<double>(g.block_size()) >= threshold &&
                          static_cast<int>(banned.size()) < g.block_size();

    mt_options mt_opts;
    mt_opts.rule = opts.rule;
    for (int attempt = 0; attempt < opts.max_restarts; ++attempt) {
        const std::uint64_t table_seed =
            rng_stream(opts.seed).derive("avoid-restart", attempt).next_u64();
        mt_opts.rule_seed = table_seed;
        resampling_table table(inst.space, table_seed);
        const run_result res = run_mt(inst.space, inst.bad_events, table, mt_opts);
        if (!res.terminated) continue;
        transversal t = to_transversal(g, res.final);
        if (std::none_of(t.begin(), t.end(), [&](int v) { return banned.count(v) > 0; })) {
            out.chosen = std::move(t);
            out.runs = attempt + 1;
            return out;
        }
    }
    throw restarts_exhausted("no avoiding transversal within the restart cap");
}

transversal_request load_transversal_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // nlohmann reports a byte offset; recover the line for the caller.
        int line = 1;
        for (std::size_t i = 0; i < text.size() && i + 1 < e.byte; ++i)
            if (text[i] == '\n') ++line;
        throw parse_error(std::string("invalid JSON: ") + e.what(), line);
    }
    try {
        if (!doc.is_object()) throw parse_error("top level must be an object", 1);
        std::vector<std::vector<int>> blocks =
            doc.at("blocks").get<std::vector<std::vector<int>>>();
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw parse_error("each edge must be a pair [u, v]", 1);
            edges.push_back({e[0].get<int>(), e[1].get<int>()});
        }
        std::vector<int> avoid;
        if (doc.contains("avoid")) avoid = doc.at("avoid").get<std::vector<int>>();
        return {block_graph(std::move(blocks), std::move(edges)), std::move(avoid)};
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bad instance: ") + e.what(), 1);
    } catch (const std::invalid_argument& e) {
        throw parse_error(std::string("bad instance: ") + e.what(), 1);
    }
}

} // namespace lll
