#pragma once

#include <cstdint>
#include <vector>

#include "lll/ksat.hpp"
#include "lll/latin.hpp"
#include "lll/transversal.hpp"

namespace lll {

/// Random k-CNF over n variables where no variable occurs in more than
/// `max_occurrences` clauses; retries whole formulas when the greedy packing
/// runs dry.  Deterministic per seed.
cnf random_ksat(int n, int clauses, int k, int max_occurrences, std::uint64_t seed);

/// Block partition of blocks*block_size consecutive vertex ids.
std::vector<std::vector<int>> grid_blocks(int blocks, int block_size);

/// Random block graph on grid_blocks(blocks, block_size): edges sampled by
/// rejection (cross-block, degree-capped, no duplicates) from `attempts`
/// uniform proposals.  Deterministic per seed.
block_graph random_block_graph(int blocks, int block_size, int max_degree, int attempts,
                               std::uint64_t seed);

/// Shuffles the n^2 cells and colors them in consecutive blocks of
/// `multiplicity`, so every color appears exactly that often (the last one
/// fewer when multiplicity does not divide n^2).  Deterministic per seed.
color_matrix balanced_color_matrix(int n, int multiplicity, std::uint64_t seed,
                                   std::vector<std::vector<double>> weights = {});

} // namespace lll
