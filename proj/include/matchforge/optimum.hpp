#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <string>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/graph.hpp"

namespace matchforge {

namespace detail {

// Edmonds' augmenting-path search with blossom contraction, one BFS per free
// root. Adjacency is scanned in ascending id order, so results are stable.
class Blossom {
public:
    explicit Blossom(const Graph& g)
        : g_(g),
          n_(static_cast<std::size_t>(g.n())),
          match_(n_, kNoNode),
          parent_(n_),
          base_(n_),
          used_(n_),
          in_blossom_(n_) {}

    std::vector<NodeId>& mates() { return match_; }

    // Returns the free endpoint of an augmenting path from root, or kNoNode.
    NodeId find_path(NodeId root) {
        std::fill(used_.begin(), used_.end(), 0);
        std::fill(parent_.begin(), parent_.end(), kNoNode);
        for (std::size_t i = 0; i < n_; ++i) base_[i] = static_cast<NodeId>(i);
        used_[idx(root)] = 1;
        std::queue<NodeId> q;
        q.push(root);
        while (!q.empty()) {
            NodeId v = q.front();
            q.pop();
            for (const Incidence& inc : g_.incident(v)) {
                NodeId to = inc.neighbor;
                if (base_[idx(v)] == base_[idx(to)] || match_[idx(v)] == to) continue;
                if (to == root || (match_[idx(to)] != kNoNode && parent_[idx(match_[idx(to)])] != kNoNode)) {
                    NodeId cur = lca(v, to);
                    std::fill(in_blossom_.begin(), in_blossom_.end(), 0);
                    mark_path(v, cur, to);
                    mark_path(to, cur, v);
                    for (std::size_t i = 0; i < n_; ++i) {
                        if (in_blossom_[idx(base_[i])]) {
                            base_[i] = cur;
                            if (!used_[i]) {
                                used_[i] = 1;
                                q.push(static_cast<NodeId>(i));
                            }
                        }
                    }
                } else if (parent_[idx(to)] == kNoNode) {
                    parent_[idx(to)] = v;
                    if (match_[idx(to)] == kNoNode) return to;
                    used_[idx(match_[idx(to)])] = 1;
                    q.push(match_[idx(to)]);
                }
            }
        }
        return kNoNode;
    }

    void augment(NodeId end) {
        NodeId v = end;
        while (v != kNoNode) {
            NodeId pv = parent_[idx(v)];
            NodeId ppv = match_[idx(pv)];
            match_[idx(v)] = pv;
            match_[idx(pv)] = v;
            v = ppv;
        }
    }

private:
    static std::size_t idx(NodeId x) { return static_cast<std::size_t>(x); }

    NodeId lca(NodeId a, NodeId b) {
        std::vector<char> seen(n_, 0);
        for (;;) {
            a = base_[idx(a)];
            seen[idx(a)] = 1;
            if (match_[idx(a)] == kNoNode) break;
            a = parent_[idx(match_[idx(a)])];
        }
        for (;;) {
            b = base_[idx(b)];
            if (seen[idx(b)]) return b;
            b = parent_[idx(match_[idx(b)])];
        }
    }

    void mark_path(NodeId v, NodeId b, NodeId child) {
        while (base_[idx(v)] != b) {
            in_blossom_[idx(base_[idx(v)])] = 1;
            in_blossom_[idx(base_[idx(match_[idx(v)])])] = 1;
            parent_[idx(v)] = child;
            child = match_[idx(v)];
            v = parent_[idx(match_[idx(v)])];
        }
    }

    const Graph& g_;
    std::size_t n_;
    std::vector<NodeId> match_;
    std::vector<NodeId> parent_;
    std::vector<NodeId> base_;
    std::vector<char> used_;
    std::vector<char> in_blossom_;
};

}  // namespace detail

// Maximum-cardinality matching. Seeds with a greedy pass over the sorted edge
// list, augments from every free node, then re-runs the search from every
// still-free node as a certificate that no augmenting path is left.
inline Matching maximum_matching(const Graph& g) {
    detail::Blossom b(g);
    auto& mate = b.mates();
    for (const Edge& e : g.edges()) {
        if (mate[static_cast<std::size_t>(e.u)] == kNoNode && mate[static_cast<std::size_t>(e.v)] == kNoNode) {
            mate[static_cast<std::size_t>(e.u)] = e.v;
            mate[static_cast<std::size_t>(e.v)] = e.u;
        }
    }
    for (NodeId v = 0; v < g.n(); ++v) {
        if (mate[static_cast<std::size_t>(v)] != kNoNode) continue;
        NodeId end = b.find_path(v);
        if (end != kNoNode) b.augment(end);
    }
    for (NodeId v = 0; v < g.n(); ++v) {
        if (mate[static_cast<std::size_t>(v)] == kNoNode)
            require(b.find_path(v) == kNoNode, "blossom certificate found an augmenting path");
    }
    std::vector<Edge> pairs;
    for (NodeId v = 0; v < g.n(); ++v) {
        NodeId w = mate[static_cast<std::size_t>(v)];
        if (w != kNoNode && v < w) pairs.emplace_back(v, w);
    }
    Matching m(std::move(pairs));
    validate_matching(g, m);
    return m;
}

inline constexpr std::size_t kBruteForceMaxEdges = 24;

// Independent oracle: walks edges in order, branching on include/exclude, and
// cuts a branch once even taking every remaining edge cannot beat the best.
inline std::size_t max_matching_bruteforce(const Graph& g, std::size_t max_edges = kBruteForceMaxEdges) {
    if (g.m() > max_edges)
        throw BudgetExceeded("brute-force matching limited to " + std::to_string(max_edges) + " edges, got " +
                             std::to_string(g.m()));
    const auto& edges = g.edges();
    std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
    std::size_t best = 0;
    const std::size_t cap = static_cast<std::size_t>(g.n()) / 2;
    auto rec = [&](auto&& self, std::size_t i, std::size_t size) -> void {
        if (size > best) best = size;
        if (i == edges.size() || best == cap) return;
        if (size + (edges.size() - i) <= best) return;
        const Edge& e = edges[i];
        auto u = static_cast<std::size_t>(e.u);
        auto v = static_cast<std::size_t>(e.v);
        if (!used[u] && !used[v]) {
            used[u] = used[v] = 1;
            self(self, i + 1, size + 1);
            used[u] = used[v] = 0;
        }
        self(self, i + 1, size);
    };
    rec(rec, 0, 0);
    return best;
}

}  // namespace matchforge
