#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/graph.hpp"
#include "matchforge/optimum.hpp"
#include "matchforge/rational.hpp"

namespace matchforge {

struct Component {
    enum class Kind { singleton, path };

    Kind kind = Kind::singleton;
    std::vector<NodeId> nodes;      // in order along the alternating structure
    std::vector<Edge> m_edges;      // in path order
    std::vector<Edge> opt_edges;    // in path order
    std::vector<NodeId> endpoints;  // path: first and last node

    std::size_t m_x() const { return m_edges.size(); }
    std::size_t m_star_x() const { return opt_edges.size(); }
    Rational local_ratio() const {
        return Rational(static_cast<std::int64_t>(m_x()), static_cast<std::int64_t>(m_star_x()));
    }
    bool is_path() const { return kind == Kind::path; }
};

inline std::string kind_name(Component::Kind k) { return k == Component::Kind::singleton ? "singleton" : "path"; }

struct Decomposition {
    std::vector<Component> components;  // sorted by least node id
    Matching m;
    Matching m_star;
    std::vector<Edge> f_edges;             // E \ (M u M*), sorted
    std::vector<int> component_of;         // node -> component index, -1 if uncovered by M u M*
    std::vector<char> is_endpoint;         // node -> is a path endpoint

    Rational global_ratio() const {
        if (m_star.size() == 0) return Rational(1);
        return Rational(static_cast<std::int64_t>(m.size()), static_cast<std::int64_t>(m_star.size()));
    }
    bool is_f_edge(const Edge& e) const { return std::binary_search(f_edges.begin(), f_edges.end(), e); }
};

namespace detail {

// Walks the components of (V, A u B). Each component is returned as an ordered
// node walk plus, per consecutive pair, whether the edge is in A, B, or both.
struct AltWalk {
    std::vector<NodeId> nodes;
    std::vector<int> tags;  // 1 = A only, 2 = B only, 3 = both
    bool cycle = false;
};

inline std::vector<AltWalk> alternating_components(NodeId n, const Matching& a, const Matching& b) {
    struct Entry {
        NodeId to;
        int tag;
    };
    std::vector<std::vector<Entry>> adj(static_cast<std::size_t>(n));
    for (const Edge& e : a.pairs()) {
        int tag = b.contains(e) ? 3 : 1;
        adj[static_cast<std::size_t>(e.u)].push_back({e.v, tag});
        adj[static_cast<std::size_t>(e.v)].push_back({e.u, tag});
    }
    for (const Edge& e : b.pairs()) {
        if (a.contains(e)) continue;
        adj[static_cast<std::size_t>(e.u)].push_back({e.v, 2});
        adj[static_cast<std::size_t>(e.v)].push_back({e.u, 2});
    }
    auto walk = [&](NodeId start, bool cycle, std::vector<char>& seen) {
        AltWalk w;
        w.cycle = cycle;
        NodeId prev = kNoNode;
        NodeId cur = start;
        for (;;) {
            seen[static_cast<std::size_t>(cur)] = 1;
            w.nodes.push_back(cur);
            const Entry* next = nullptr;
            for (const Entry& en : adj[static_cast<std::size_t>(cur)])
                if (en.to != prev) {
                    next = &en;
                    break;
                }
            if (!next) break;
            w.tags.push_back(next->tag);
            if (next->to == start) break;
            prev = cur;
            cur = next->to;
        }
        return w;
    };
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<AltWalk> out;
    // Paths first, from their degree-1 ends; whatever remains are cycles.
    for (NodeId s = 0; s < n; ++s)
        if (!seen[static_cast<std::size_t>(s)] && adj[static_cast<std::size_t>(s)].size() == 1)
            out.push_back(walk(s, false, seen));
    for (NodeId s = 0; s < n; ++s)
        if (!seen[static_cast<std::size_t>(s)] && adj[static_cast<std::size_t>(s)].size() == 2)
            out.push_back(walk(s, true, seen));
    std::sort(out.begin(), out.end(), [](const AltWalk& x, const AltWalk& y) {
        return *std::min_element(x.nodes.begin(), x.nodes.end()) < *std::min_element(y.nodes.begin(), y.nodes.end());
    });
    return out;
}

}  // namespace detail

// Rewrites a maximum matching m_prime so that every component of (V, M u M*)
// is a single shared edge or an augmenting path that starts and ends with
// M*-edges. Cycles and even-length mixed paths take their M-edges instead.
inline Matching canonicalize(const Graph& g, const Matching& m, const Matching& m_prime) {
    validate_matching(g, m);
    validate_matching(g, m_prime);
    if (!is_maximal(g, m)) throw InputError("canonicalize: M is not maximal");
    if (m_prime.size() != maximum_matching(g).size()) throw InputError("canonicalize: M' is not a maximum matching");
    std::vector<Edge> out;
    for (const detail::AltWalk& w : detail::alternating_components(g.n(), m, m_prime)) {
        std::size_t count_a = 0, count_b = 0;
        for (int t : w.tags) {
            if (t & 1) ++count_a;
            if (t & 2) ++count_b;
        }
        auto edge_at = [&](std::size_t i) {
            return Edge(w.nodes[i], w.cycle && i + 1 == w.nodes.size() ? w.nodes[0] : w.nodes[i + 1]);
        };
        if (w.tags.size() == 1 && w.tags[0] == 3) {
            out.push_back(edge_at(0));
            continue;
        }
        const bool ends_with_b = !w.cycle && w.tags.front() == 2 && w.tags.back() == 2;
        const bool ends_with_a = !w.cycle && w.tags.front() == 1 && w.tags.back() == 1;
        // Both are ruled out by the maximality and maximum-size checks above.
        require(!ends_with_a, "canonicalize: component ends in M-edges on both sides, so M' is not maximum");
        require(!(ends_with_b && count_a == 0), "canonicalize: lone M'-edge with both ends M-free, so M is not maximal");
        const int keep = ends_with_b ? 2 : 1;
        for (std::size_t i = 0; i < w.tags.size(); ++i)
            if (w.tags[i] & keep) out.push_back(edge_at(i));
    }
    Matching result(std::move(out));
    require(result.size() == m_prime.size(), "canonicalize changed the matching size");
    validate_matching(g, result);
    return result;
}

inline Decomposition decompose(const Graph& g, const Matching& m, const Matching& m_star) {
    validate_matching(g, m);
    validate_matching(g, m_star);
    Decomposition d;
    d.m = m;
    d.m_star = m_star;
    d.component_of.assign(static_cast<std::size_t>(g.n()), -1);
    d.is_endpoint.assign(static_cast<std::size_t>(g.n()), 0);
    for (const detail::AltWalk& w : detail::alternating_components(g.n(), m, m_star)) {
        Component c;
        if (w.cycle) throw InputError("decompose: M u M* contains a cycle (M* not canonical)");
        if (w.tags.size() == 1 && w.tags[0] == 3) {
            c.kind = Component::Kind::singleton;
            c.nodes = w.nodes;
            Edge e(w.nodes[0], w.nodes[1]);
            c.m_edges = {e};
            c.opt_edges = {e};
        } else {
            if (w.tags.front() != 2 || w.tags.back() != 2)
                throw InputError("decompose: component is not an M-M*-path (M* not canonical)");
            c.kind = Component::Kind::path;
            c.nodes = w.nodes;
            if (c.nodes.back() < c.nodes.front()) std::reverse(c.nodes.begin(), c.nodes.end());
            for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i) {
                Edge e(c.nodes[i], c.nodes[i + 1]);
                (i % 2 == 0 ? c.opt_edges : c.m_edges).push_back(e);
            }
            require(c.opt_edges.size() == c.m_edges.size() + 1, "path alternation broken");
            c.endpoints = {c.nodes.front(), c.nodes.back()};
        }
        const int idx = static_cast<int>(d.components.size());
        for (NodeId x : c.nodes) d.component_of[static_cast<std::size_t>(x)] = idx;
        for (NodeId x : c.endpoints) d.is_endpoint[static_cast<std::size_t>(x)] = 1;
        d.components.push_back(std::move(c));
    }
    for (const Edge& e : g.edges())
        if (!m.contains(e) && !m_star.contains(e)) d.f_edges.push_back(e);
    return d;
}

// Canonicalizes a fresh maximum matching and decomposes in one go.
inline Decomposition decompose_run(const Graph& g, const Matching& m) {
    Matching m_star = canonicalize(g, m, maximum_matching(g));
    return decompose(g, m, m_star);
}

inline std::map<NodeId, int> endpoint_degrees(const Decomposition& d, const Graph& g) {
    std::map<NodeId, int> out;
    for (const Component& c : d.components)
        for (NodeId w : c.endpoints) out[w] = g.degree(w);
    return out;
}

inline std::string format_decomposition(const Decomposition& d) {
    std::ostringstream os;
    for (const Component& c : d.components) {
        os << "c " << kind_name(c.kind) << ' ' << c.m_x() << ' ' << c.m_star_x();
        for (NodeId x : c.nodes) os << ' ' << x;
        os << '\n';
    }
    return os.str();
}

}  // namespace matchforge
