#include "lll/witness_tree.hpp"

#include <algorithm>

#include "lll/orderable.hpp"

namespace lll {

tree_structure build_witness_tree(std::span<const int> log, const atomic_perm_event& a,
                                  std::span<const atomic_perm_event> bad_events) {
    tree_structure t{a, {-1}, {0}, {-1}};
    for (int i = static_cast<int>(log.size()) - 1; i >= 0; --i) {
        const int bt = log[i];
        // Deepest non-root node related to the event, ties toward the
        // smallest label index.
        int best = -1;
        for (int v = 1; v < t.size(); ++v) {
            if (!related(bad_events[t.label[v]], bad_events[bt])) continue;
            if (best < 0 || t.depth[v] > t.depth[best] ||
                (t.depth[v] == t.depth[best] && t.label[v] < t.label[best]))
                best = v;
        }
        if (best < 0) {
            // Root attachment: the root children's labels plus the event
            // must stay independent and orderable to the root label.
            std::vector<atomic_perm_event> candidate;
            for (int v = 1; v < t.size(); ++v)
                if (t.parent[v] == 0) candidate.push_back(bad_events[t.label[v]]);
            candidate.push_back(bad_events[bt]);
            bool independent = true;
            for (std::size_t x = 0; x < candidate.size() && independent; ++x)
                for (std::size_t y = x + 1; y < candidate.size(); ++y)
                    if (related(candidate[x], candidate[y])) independent = false;
            if (!independent || !is_orderable(candidate, a)) continue;
            best = 0;
        }
        t.parent.push_back(best);
        t.depth.push_back(t.depth[best] + 1);
        t.label.push_back(bt);
    }
    return t;
}

double tree_weight(const tree_structure& t, std::span<const double> event_probs,
                   double root_prob) {
    double w = root_prob;
    for (int v = 1; v < t.size(); ++v) w *= event_probs[t.label[v]];
    return w;
}

double tree_weight(int n, const tree_structure& t,
                   std::span<const atomic_perm_event> bad_events) {
    double w = perm_event_probability(n, t.root_label);
    for (int v = 1; v < t.size(); ++v)
        w *= perm_event_probability(n, bad_events[t.label[v]]);
    return w;
}

namespace {

std::string encode_node(const tree_structure& t, int v,
                        const std::vector<std::vector<int>>& children) {
    std::string head =
        v == 0 ? std::string("root") : std::to_string(t.label[v]);
    std::vector<std::string> parts;
    for (int c : children[v]) parts.push_back(encode_node(t, c, children));
    std::sort(parts.begin(), parts.end());
    std::string out = "(" + head;
    for (const auto& p : parts) out += p;
    out += ")";
    return out;
}

} // namespace

std::string canonical_encoding(const tree_structure& t) {
    std::vector<std::vector<int>> children(t.size());
    for (int v = 1; v < t.size(); ++v) children[t.parent[v]].push_back(v);
    std::string out;
    for (auto [x, y] : t.root_label.pairs())
        out += "[" + std::to_string(x) + "," + std::to_string(y) + "]";
    return out + encode_node(t, 0, children);
}

} // namespace lll
