#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matchforge/error.hpp"

namespace matchforge {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

inline constexpr NodeId kNoNode = -1;

// Unordered pair, always stored with u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    Edge() = default;
    Edge(NodeId a, NodeId b) : u(std::min(a, b)), v(std::max(a, b)) {}

    NodeId other(NodeId x) const { return x == u ? v : u; }
    bool touches(NodeId x) const { return x == u || x == v; }

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Incidence {
    NodeId neighbor;
    EdgeId edge;
};

// Immutable simple undirected graph on nodes 0..n-1. Edges are kept sorted, so
// an EdgeId is the rank of the edge in lexicographic (u, v) order. Adjacency
// lists are sorted by neighbor id.
class Graph {
public:
    Graph() = default;

    explicit Graph(NodeId n, std::vector<Edge> edges = {}) : n_(n), edges_(std::move(edges)) {
        if (n < 0) throw InputError("negative node count");
        for (const Edge& e : edges_) {
            if (e.u == e.v) throw InputError("self-loop at node " + std::to_string(e.u));
            if (e.u < 0 || e.v >= n_)
                throw InputError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                 "} has node id outside 0.." + std::to_string(n_ - 1));
        }
        std::sort(edges_.begin(), edges_.end());
        for (std::size_t i = 1; i < edges_.size(); ++i) {
            if (edges_[i] == edges_[i - 1])
                throw InputError("duplicate edge {" + std::to_string(edges_[i].u) + "," +
                                 std::to_string(edges_[i].v) + "}");
        }
        adj_.assign(static_cast<std::size_t>(n_), {});
        for (EdgeId id = 0; id < static_cast<EdgeId>(edges_.size()); ++id) {
            const Edge& e = edges_[static_cast<std::size_t>(id)];
            adj_[static_cast<std::size_t>(e.u)].push_back({e.v, id});
            adj_[static_cast<std::size_t>(e.v)].push_back({e.u, id});
        }
        for (auto& list : adj_) {
            std::sort(list.begin(), list.end(),
                      [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
            delta_ = std::max(delta_, static_cast<int>(list.size()));
        }
    }

    NodeId n() const { return n_; }
    std::size_t m() const { return edges_.size(); }
    int delta() const { return delta_; }

    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId id) const { return edges_[static_cast<std::size_t>(id)]; }
    const std::vector<Incidence>& incident(NodeId v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(NodeId v) const { return static_cast<int>(adj_[static_cast<std::size_t>(v)].size()); }

    std::optional<EdgeId> find_edge(NodeId a, NodeId b) const {
        if (a < 0 || b < 0 || a >= n_ || b >= n_ || a == b) return std::nullopt;
        const auto& list = adj_[static_cast<std::size_t>(a)];
        auto it = std::lower_bound(list.begin(), list.end(), b,
                                   [](const Incidence& inc, NodeId x) { return inc.neighbor < x; });
        if (it == list.end() || it->neighbor != b) return std::nullopt;
        return it->edge;
    }
    bool has_edge(NodeId a, NodeId b) const { return find_edge(a, b).has_value(); }

    std::vector<NodeId> neighbors(NodeId v) const {
        std::vector<NodeId> out;
        out.reserve(incident(v).size());
        for (const Incidence& inc : incident(v)) out.push_back(inc.neighbor);
        return out;
    }

private:
    NodeId n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Incidence>> adj_;
    int delta_ = 0;
};

// Node-disjoint set of edges, stored sorted.
class Matching {
public:
    Matching() = default;
    explicit Matching(std::vector<Edge> pairs) : pairs_(std::move(pairs)) {
        std::sort(pairs_.begin(), pairs_.end());
        pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
    }

    const std::vector<Edge>& pairs() const { return pairs_; }
    std::size_t size() const { return pairs_.size(); }
    bool empty() const { return pairs_.empty(); }

    bool contains(const Edge& e) const { return std::binary_search(pairs_.begin(), pairs_.end(), e); }

    // mate[v] = partner of v, or kNoNode.
    std::vector<NodeId> mates(NodeId n) const {
        std::vector<NodeId> mate(static_cast<std::size_t>(n), kNoNode);
        for (const Edge& e : pairs_) {
            mate[static_cast<std::size_t>(e.u)] = e.v;
            mate[static_cast<std::size_t>(e.v)] = e.u;
        }
        return mate;
    }

    friend bool operator==(const Matching&, const Matching&) = default;

private:
    std::vector<Edge> pairs_;
};

// Throws InputError unless m is a set of node-disjoint edges of g.
inline void validate_matching(const Graph& g, const Matching& m) {
    std::vector<char> used(static_cast<std::size_t>(g.n()), 0);
    for (const Edge& e : m.pairs()) {
        if (!g.has_edge(e.u, e.v))
            throw InputError("matched pair {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                             "} is not an edge");
        for (NodeId x : {e.u, e.v}) {
            if (used[static_cast<std::size_t>(x)])
                throw InputError("node " + std::to_string(x) + " is matched twice");
            used[static_cast<std::size_t>(x)] = 1;
        }
    }
}

inline bool is_maximal(const Graph& g, const Matching& m) {
    const auto mate = m.mates(g.n());
    for (const Edge& e : g.edges()) {
        if (mate[static_cast<std::size_t>(e.u)] == kNoNode && mate[static_cast<std::size_t>(e.v)] == kNoNode)
            return false;
    }
    return true;
}

inline std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
    std::vector<std::vector<NodeId>> out;
    std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < g.n(); ++s) {
        if (seen[static_cast<std::size_t>(s)]) continue;
        std::vector<NodeId> comp;
        seen[static_cast<std::size_t>(s)] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId x = stack.back();
            stack.pop_back();
            comp.push_back(x);
            for (const Incidence& inc : g.incident(x)) {
                if (!seen[static_cast<std::size_t>(inc.neighbor)]) {
                    seen[static_cast<std::size_t>(inc.neighbor)] = 1;
                    stack.push_back(inc.neighbor);
                }
            }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

}  // namespace matchforge
