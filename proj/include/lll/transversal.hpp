#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lll/events.hpp"
#include "lll/selection.hpp"

namespace lll {

/// Graph whose vertex set is partitioned into equal-size blocks.  Vertex ids
/// are arbitrary distinct non-negative ints; every edge endpoint must belong
/// to a block, self-loops and duplicate edges are rejected.
class block_graph {
  public:
    block_graph(std::vector<std::vector<int>> blocks,
                std::vector<std::pair<int, int>> edges);

    int block_count() const { return static_cast<int>(blocks_.size()); }
    /// Common block cardinality b (0 for the empty graph).
    int block_size() const { return blocks_.empty() ? 0 : static_cast<int>(blocks_[0].size()); }
    int vertex_count() const { return block_count() * block_size(); }
    /// Max degree over the listed edges, intra-block ones included.
    int max_degree() const { return max_degree_; }

    const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    bool has_vertex(int v) const { return where_.count(v) > 0; }
    /// (block index, offset within the block); throws std::out_of_range for
    /// unknown ids.
    std::pair<int, int> locate(int v) const;
    int block_of(int v) const { return locate(v).first; }

  private:
    std::vector<std::vector<int>> blocks_;
    std::vector<std::pair<int, int>> edges_;
    std::unordered_map<int, std::pair<int, int>> where_;
    int max_degree_ = 0;
};

/// One chosen vertex id per block, indexed by block.
using transversal = std::vector<int>;

/// Exactly one vertex per block, each from its own block.
bool is_transversal(const block_graph& g, const transversal& t);
/// A transversal spanning no edge of g.
bool is_independent_transversal(const block_graph& g, const transversal& t);

struct transversal_instance {
    var_space space;                       // one variable per block, uniform on [0, b)
    std::vector<scoped_event> bad_events;  // both endpoints of an edge chosen
    std::vector<std::pair<int, int>> event_edges; // originating edge, parallel
    /// Intra-block edges are unrepresentable as two-variable conjunctions and
    /// already unsatisfiable under one-choice-per-block, so they are dropped;
    /// callers that want to warn can inspect this count.
    int dropped_intra_block = 0;
};

/// Variable per block whose value picks the block's vertex; bad event per
/// cross-block edge.  Requires b >= 1.
transversal_instance to_lll_instance(const block_graph& g);

/// Decode a value-per-block assignment into the chosen vertex ids.
transversal to_transversal(const block_graph& g, const assignment& x);

/// The uniform cluster weight alpha = (b - sqrt(b(b-4D)) - 2D) / (2bD^2)
/// under which every edge event passes the cluster-expansion criterion for
/// any graph of max degree D.  Requires b >= 4D (subcritical_block_size).
double alpha_cluster(int b, int delta);

struct avoidance_result {
    double bound = 0.0;
    /// 2l / ((b+l) + (b-l) sqrt(1-4D/b)): the whole bound for b >= 4.5D.
    double ratio_form = 0.0;
    /// 2 (1 - e^{-l/b}) / (1 + sqrt(1-4D/b)): competes below 4.5D.
    double exp_form = 0.0;
    bool large_regime = false;  // b >= 4.5D, where only the ratio form applies
    bool used_exp_form = false; // which form realized the max (small regime)
};

/// Bound on the probability that the algorithm's transversal meets a fixed
/// vertex set of size l.  Requires b >= 4D and 0 <= l < b (the bound is
/// vacuous at l = b); dispatches on whether b >= 4.5D.
avoidance_result avoidance_bound(int b, int delta, int l);

struct avoid_options {
    std::uint64_t seed = 0;
    int max_restarts = 64;
    select_rule rule = select_rule::lowest_index;
};

struct avoid_search_result {
    transversal chosen;
    int runs = 1;                // algorithm runs used, the successful one included
    /// b >= e^2/(e-1) * D and |avoid| < b, the regime with a guaranteed
    /// per-run success probability.  The search still tries when false.
    bool precondition_ok = true;
};

/// Repeatedly run the algorithm until the resulting independent transversal
/// is disjoint from `avoid`.  Throws out_of_range_error when `avoid` covers a
/// whole block (no such transversal exists) and restarts_exhausted after
/// max_restarts failed runs.
avoid_search_result find_avoiding_transversal(const block_graph& g,
                                              const std::vector<int>& avoid,
                                              const avoid_options& opts = {});

struct transversal_request {
    block_graph graph;
    std::vector<int> avoid;
};

/// Parse {"blocks": [[ids]...], "edges": [[u,v]...], "avoid": [ids]} ("avoid"
/// optional).  Throws parse_error; schema-level problems report line 1.
transversal_request load_transversal_json(const std::string& text);

} // namespace lll
