#pragma once

#include <span>
#include <string>
#include <vector>

#include "lll/events.hpp"

namespace lll {

/// Rooted tree whose root carries an external atomic event and whose other
/// nodes carry bad-event indices.  Node 0 is the root; nodes were appended
/// after their parents, so parent[v] < v throughout.
struct tree_structure {
    atomic_perm_event root_label;
    std::vector<int> parent; // parent[0] = -1
    std::vector<int> depth;  // depth[0] = 0
    std::vector<int> label;  // label[0] = -1; otherwise an index into the family

    int size() const { return static_cast<int>(parent.size()); }
};

/// Backward scan over a resampling log: each event attaches below the
/// deepest related non-root node (depth ties broken toward the smallest
/// event index), else below the root when the root children's labels plus
/// the event form an independent set orderable to `a`, else nowhere.
tree_structure build_witness_tree(std::span<const int> log, const atomic_perm_event& a,
                                  std::span<const atomic_perm_event> bad_events);

/// Product of the label probabilities over all nodes, root included.
double tree_weight(const tree_structure& t, std::span<const double> event_probs,
                   double root_prob);

/// Same with plain permutation probabilities on [0, n).
double tree_weight(int n, const tree_structure& t,
                   std::span<const atomic_perm_event> bad_events);

/// Serialization that ignores sibling order: two trees for the same event
/// family produce identical strings exactly when they match as unordered
/// labeled trees (root label included).
std::string canonical_encoding(const tree_structure& t);

} // namespace lll
