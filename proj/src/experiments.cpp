#include "lll/experiments.hpp"

#include <set>
#include <utility>

#include "lll/rng.hpp"

namespace lll {

cnf random_ksat(int n, int clauses, int k, int max_occurrences, std::uint64_t seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        rng_stream rng = rng_stream(seed).derive("ksat-gen", attempt);
        std::vector<int> counts(n, 0);
        cnf f;
        f.n = n;
        bool ok = true;
        for (int c = 0; c < clauses && ok; ++c) {
            std::vector<int> avail;
            for (int v = 0; v < n; ++v)
                if (counts[v] < max_occurrences) avail.push_back(v);
            if (static_cast<int>(avail.size()) < k) {
                ok = false;
                break;
            }
            std::vector<int> clause;
            for (int t = 0; t < k; ++t) {
                const auto left = avail.size() - t;
                const auto pick = t + static_cast<std::size_t>(rng.next_below(left));
                std::swap(avail[t], avail[pick]);
                const int var = avail[t];
                ++counts[var];
                clause.push_back(rng.next_bernoulli(0.5) ? var + 1 : -(var + 1));
            }
            f.clauses.push_back(std::move(clause));
        }
        if (ok) return f;
    }
}

std::vector<std::vector<int>> grid_blocks(int blocks, int block_size) {
    std::vector<std::vector<int>> out(blocks);
    for (int i = 0; i < blocks; ++i)
        for (int j = 0; j < block_size; ++j) out[i].push_back(i * block_size + j);
    return out;
}

block_graph random_block_graph(int blocks, int block_size, int max_degree, int attempts,
                               std::uint64_t seed) {
    rng_stream rng = rng_stream(seed).derive("block-gen");
    const int n = blocks * block_size;
    std::vector<int> deg(n, 0);
    std::set<std::pair<int, int>> seen;
    std::vector<std::pair<int, int>> edges;
    for (int t = 0; t < attempts; ++t) {
        const int u = static_cast<int>(rng.next_below(n));
        const int v = static_cast<int>(rng.next_below(n));
        if (u / block_size == v / block_size) continue; // same block
        if (deg[u] >= max_degree || deg[v] >= max_degree) continue;
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second) continue;
        edges.push_back({u, v});
        ++deg[u];
        ++deg[v];
    }
    return block_graph(grid_blocks(blocks, block_size), edges);
}

color_matrix balanced_color_matrix(int n, int multiplicity, std::uint64_t seed,
                                   std::vector<std::vector<double>> weights) {
    std::vector<std::pair<int, int>> cells;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) cells.push_back({x, y});
    rng_stream rng = rng_stream(seed).derive("matrix-shuffle");
    for (std::size_t i = cells.size(); i > 1; --i)
        std::swap(cells[i - 1], cells[rng.next_below(i)]);
    std::vector<std::vector<int>> colors(n, std::vector<int>(n, 0));
    for (std::size_t i = 0; i < cells.size(); ++i)
        colors[cells[i].first][cells[i].second] = static_cast<int>(i / multiplicity);
    return color_matrix(std::move(colors), std::move(weights));
}

} // namespace lll
