#include "lll/witness.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace lll {

witness_dag full_witness_dag(std::span<const int> log,
                             std::span<const scoped_event> bad_events) {
    witness_dag g;
    const int t = static_cast<int>(log.size());
    g.labels.reserve(t);
    g.preds.resize(t);
    for (int j = 0; j < t; ++j) {
        g.labels.push_back(bad_events[log[j]]);
        for (int i = 0; i < j; ++i)
            if (related(g.labels[i], g.labels[j])) g.preds[j].push_back(i);
    }
    return g;
}

witness_dag project_dag(const witness_dag& g, const scoped_event& e) {
    const int t = g.size();
    // A node is relevant iff related to e or some successor is relevant;
    // scanning from the last node downward settles each flag before its
    // predecessors need it.
    std::vector<char> relevant(t, 0);
    for (int v = t - 1; v >= 0; --v) {
        if (related(g.labels[v], e)) relevant[v] = 1;
        if (relevant[v])
            for (int u : g.preds[v]) relevant[u] = 1;
    }

    witness_dag out;
    std::vector<int> new_id(t, -1);
    for (int v = 0; v < t; ++v) {
        if (!relevant[v]) continue;
        new_id[v] = out.size();
        out.labels.push_back(g.labels[v]);
        out.preds.emplace_back();
        for (int u : g.preds[v])
            if (new_id[u] >= 0) out.preds.back().push_back(new_id[u]);
    }
    out.root = out.size();
    out.labels.push_back(e);
    out.preds.emplace_back();
    for (int v = 0; v < t; ++v)
        if (new_id[v] >= 0 && related(g.labels[v], e)) out.preds[out.root].push_back(new_id[v]);
    return out;
}

double dag_weight(const var_space& space, const witness_dag& g) {
    double w = 1.0;
    for (const auto& label : g.labels) w *= event_probability(space, label);
    return w;
}

bool compatible(const witness_dag& tau, const resampling_table& table) {
    const int t = tau.size();
    const int blocks = (t + 63) / 64;

    // Ancestor closure (self included), valid because node order is
    // topological.
    std::vector<std::uint64_t> anc(static_cast<std::size_t>(t) * blocks, 0);
    for (int v = 0; v < t; ++v) {
        auto* row = &anc[static_cast<std::size_t>(v) * blocks];
        row[v / 64] |= std::uint64_t{1} << (v % 64);
        for (int u : tau.preds[v]) {
            if (u >= v) throw std::invalid_argument("node order is not topological");
            const auto* urow = &anc[static_cast<std::size_t>(u) * blocks];
            for (int b = 0; b < blocks; ++b) row[b] |= urow[b];
        }
    }

    // Per-variable masks of the nodes involving it.
    std::unordered_map<int, std::vector<std::uint64_t>> involve;
    for (int v = 0; v < t; ++v)
        for (int i : tau.labels[v].scope()) {
            auto [it, fresh] = involve.try_emplace(i);
            if (fresh) it->second.assign(blocks, 0);
            it->second[v / 64] |= std::uint64_t{1} << (v % 64);
        }

    std::vector<int> scoped_vals;
    for (int v = 0; v < t; ++v) {
        const auto* row = &anc[static_cast<std::size_t>(v) * blocks];
        scoped_vals.clear();
        for (int i : tau.labels[v].scope()) {
            const auto& mask = involve.at(i);
            int rho = 0;
            for (int b = 0; b < blocks; ++b) rho += std::popcount(row[b] & mask[b]);
            scoped_vals.push_back(table.entry(i, rho));
        }
        if (!tau.labels[v].holds_scoped(scoped_vals)) return false;
    }
    return true;
}

} // namespace lll
