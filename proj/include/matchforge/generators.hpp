#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/graph.hpp"
#include "matchforge/rng.hpp"

namespace matchforge {

// Visits all node pairs in a seeded random order and keeps each with
// probability p while both ends are below the degree cap.
inline Graph gen_random_bounded(NodeId n, int delta, double p, std::uint64_t seed) {
    if (delta < 1) throw InputError("gen_random_bounded needs delta >= 1");
    if (n < 0) throw InputError("negative node count");
    Rng rng(seed);
    std::vector<Edge> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n > 0 ? n - 1 : 0) / 2);
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    rng.shuffle(pairs);
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    std::vector<Edge> kept;
    for (const Edge& e : pairs) {
        if (!rng.bernoulli(p)) continue;
        if (deg[static_cast<std::size_t>(e.u)] >= delta || deg[static_cast<std::size_t>(e.v)] >= delta) continue;
        ++deg[static_cast<std::size_t>(e.u)];
        ++deg[static_cast<std::size_t>(e.v)];
        kept.push_back(e);
    }
    return Graph(n, std::move(kept));
}

// Pairing (configuration) model: shuffle n*d half-edges, pair them up, and
// retry whenever a loop or double edge appears.
inline Graph gen_regular(NodeId n, int d, std::uint64_t seed, int max_attempts = 100000) {
    if (n <= 0 || d < 0) throw InputError("gen_regular needs n > 0 and d >= 0");
    if ((static_cast<long long>(n) * d) % 2 != 0) throw InputError("gen_regular: n*d must be even");
    if (d >= n) throw InputError("gen_regular: need d < n");
    Rng rng(seed);
    std::vector<NodeId> points;
    points.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        points.clear();
        for (NodeId v = 0; v < n; ++v)
            for (int k = 0; k < d; ++k) points.push_back(v);
        rng.shuffle(points);
        std::vector<Edge> edges;
        edges.reserve(points.size() / 2);
        bool ok = true;
        for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
            if (points[i] == points[i + 1]) {
                ok = false;
                break;
            }
            edges.emplace_back(points[i], points[i + 1]);
        }
        if (!ok) continue;
        std::sort(edges.begin(), edges.end());
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
        return Graph(n, std::move(edges));
    }
    throw BudgetExceeded("gen_regular: rejection budget of " + std::to_string(max_attempts) +
                         " attempts exhausted for n=" + std::to_string(n) + ", d=" + std::to_string(d));
}

inline Graph make_path(NodeId n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return Graph(n, std::move(e));
}

inline Graph make_cycle(NodeId n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    return Graph(n, std::move(e));
}

inline Graph make_complete(NodeId n) {
    std::vector<Edge> e;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) e.emplace_back(u, v);
    return Graph(n, std::move(e));
}

inline Graph make_star(NodeId leaves) {
    std::vector<Edge> e;
    for (NodeId i = 1; i <= leaves; ++i) e.emplace_back(0, i);
    return Graph(leaves + 1, std::move(e));
}

inline Graph make_petersen() {
    std::vector<Edge> e;
    for (NodeId i = 0; i < 5; ++i) {
        e.emplace_back(i, (i + 1) % 5);
        e.emplace_back(i, i + 5);
        e.emplace_back(5 + i, 5 + (i + 2) % 5);
    }
    return Graph(10, std::move(e));
}

}  // namespace matchforge
