#include "lll/depgraph.hpp"

#include <algorithm>
#include <stdexcept>

#include "lll/errors.hpp"

namespace lll {

dep_graph::dep_graph(std::vector<double> probs, std::span<const std::pair<int, int>> edges)
    : probs_(std::move(probs)) {
    const int m = static_cast<int>(probs_.size());
    for (double p : probs_)
        if (!(p >= 0.0 && p < 1.0))
            throw std::invalid_argument("event probabilities must lie in [0, 1)");
    rows_.assign(m, std::vector<std::uint64_t>((static_cast<std::size_t>(m) + 63) / 64, 0));
    auto set_bit = [this](int i, int j) {
        rows_[i][static_cast<std::size_t>(j) >> 6] |= std::uint64_t{1} << (j & 63);
    };
    for (int i = 0; i < m; ++i) set_bit(i, i);
    for (auto [i, j] : edges) {
        if (i < 0 || j < 0 || i >= m || j >= m)
            throw std::invalid_argument("edge endpoint out of range");
        set_bit(i, j);
        set_bit(j, i);
    }
}

std::uint64_t dep_graph::neighbor_mask64(int i) const {
    if (m() > 64) throw budget_exceeded("neighbor_mask64 requires at most 64 events");
    return rows_[i].empty() ? 0 : rows_[i][0];
}

std::vector<int> dep_graph::neighbors(int i) const {
    std::vector<int> out;
    for (int j = 0; j < m(); ++j)
        if (adjacent(i, j)) out.push_back(j);
    return out;
}

bool dep_graph::is_independent(std::span<const int> members) const {
    for (std::size_t a = 0; a < members.size(); ++a)
        for (std::size_t b = a + 1; b < members.size(); ++b)
            if (adjacent(members[a], members[b])) return false;
    return true;
}

dep_graph make_dep_graph(const var_space& space, std::span<const scoped_event> events) {
    std::vector<double> probs;
    probs.reserve(events.size());
    for (const auto& e : events) probs.push_back(event_probability(space, e));
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < events.size(); ++i)
        for (std::size_t j = i + 1; j < events.size(); ++j)
            if (related(events[i], events[j]))
                edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return dep_graph(std::move(probs), edges);
}

dep_graph make_dep_graph(int n, std::span<const atomic_perm_event> events) {
    std::vector<double> probs;
    probs.reserve(events.size());
    for (const auto& e : events) probs.push_back(perm_event_probability(n, e));
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i < events.size(); ++i)
        for (std::size_t j = i + 1; j < events.size(); ++j)
            if (related(events[i], events[j]))
                edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return dep_graph(std::move(probs), edges);
}

void for_each_independent_set(const dep_graph& g, std::span<const int> filter,
                              const std::function<void(std::span<const int>)>& visit,
                              const indep_enum_options& opts) {
    for (int v : filter)
        if (v < 0 || v >= g.m()) throw std::invalid_argument("filter vertex out of range");
    if (opts.max_size < 0 && filter.size() > 30)
        throw budget_exceeded("unbounded independent-set enumeration over more than "
                              "30 vertices; supply a size cap");
    std::vector<int> order(filter.begin(), filter.end());
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());

    std::size_t visited = 0;
    std::vector<int> chosen;
    auto emit = [&](std::span<const int> members) {
        if (++visited > opts.max_sets)
            throw budget_exceeded("independent-set enumeration exceeds budget");
        visit(members);
    };
    // Depth-first extension by ascending vertex: each independent set is
    // reached exactly once, via its sorted member sequence.
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (opts.max_size >= 0 && static_cast<int>(chosen.size()) >= opts.max_size) return;
        for (std::size_t k = start; k < order.size(); ++k) {
            int v = order[k];
            bool ok = true;
            for (int u : chosen)
                if (g.adjacent(u, v)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(v);
            emit(chosen);
            self(self, k + 1);
            chosen.pop_back();
        }
    };
    emit(chosen); // the empty set
    rec(rec, 0);
}

std::vector<std::vector<int>> independent_sets(const dep_graph& g, std::span<const int> filter,
                                               const indep_enum_options& opts) {
    std::vector<std::vector<int>> out;
    for_each_independent_set(
        g, filter, [&out](std::span<const int> members) {
            out.emplace_back(members.begin(), members.end());
        },
        opts);
    return out;
}

} // namespace lll
