#pragma once

#include <span>
#include <vector>

#include "lll/events.hpp"
#include "lll/table.hpp"

namespace lll {

/// A DAG whose nodes are labeled by events.  Nodes are numbered in a
/// topological order: every edge points from a lower index to a higher one,
/// and edges are stored as direct-predecessor lists.  Both constructors below
/// preserve this numbering, and consumers rely on it.
struct witness_dag {
    std::vector<scoped_event> labels;
    std::vector<std::vector<int>> preds; // preds[v]: tails of edges into v
    /// Sink added by project_dag (-1 for a raw run record).
    int root = -1;

    int size() const { return static_cast<int>(labels.size()); }
};

/// Record of a run that resampled bad_events[log[0]], bad_events[log[1]], ...:
/// one node per entry in order, and an edge between every earlier/later pair
/// of related events (an event is related to itself).
witness_dag full_witness_dag(std::span<const int> log,
                             std::span<const scoped_event> bad_events);

/// Restriction of `g` to the nodes relevant to `e` -- those with a directed
/// path to some node whose label is related to `e` -- plus a new sink labeled
/// `e` with an edge from every kept node related to it.  The sink's index is
/// recorded in the result's root field.
witness_dag project_dag(const witness_dag& g, const scoped_event& e);

/// Product of the label probabilities over all nodes.
double dag_weight(const var_space& space, const witness_dag& g);

/// Whether every node's label holds on the configuration the table implies
/// for it: node v reads variable i at position rho(v, i), the number of
/// nodes that involve i and have a path to v (v itself included).  When the
/// nodes involving any one variable lie on a common path -- true of every
/// DAG a run produces -- a fresh table satisfies this with probability
/// exactly dag_weight.
bool compatible(const witness_dag& tau, const resampling_table& table);

} // namespace lll
