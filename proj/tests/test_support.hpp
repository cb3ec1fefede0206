#pragma once

// Independent reference implementations used as oracles by the unit tests.
// They deliberately avoid ResidualView, the memoized search and the blossom
// code so that agreement means something.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <filesystem>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include <sys/wait.h>

#include "matchforge/graph.hpp"
#include "matchforge/rng.hpp"

namespace oracle {

using matchforge::Edge;
using matchforge::Graph;
using matchforge::NodeId;

inline Graph graph_of(NodeId n, std::vector<std::pair<int, int>> pairs) {
    std::vector<Edge> edges;
    for (auto [a, b] : pairs) edges.emplace_back(a, b);
    return Graph(n, std::move(edges));
}

// Plain adjacency-set residual graph.
struct NaiveResidual {
    std::vector<std::set<NodeId>> adj;

    explicit NaiveResidual(const Graph& g) : adj(static_cast<std::size_t>(g.n())) {
        for (const Edge& e : g.edges()) {
            adj[static_cast<std::size_t>(e.u)].insert(e.v);
            adj[static_cast<std::size_t>(e.v)].insert(e.u);
        }
    }
    int deg(NodeId x) const { return static_cast<int>(adj[static_cast<std::size_t>(x)].size()); }
    bool empty() const {
        return std::all_of(adj.begin(), adj.end(), [](const auto& s) { return s.empty(); });
    }
    int min_deg() const {
        int best = 0;
        for (const auto& s : adj)
            if (!s.empty() && (best == 0 || static_cast<int>(s.size()) < best)) best = static_cast<int>(s.size());
        return best;
    }
    std::vector<NodeId> min_nodes() const {
        std::vector<NodeId> out;
        int d = min_deg();
        for (std::size_t i = 0; i < adj.size(); ++i)
            if (d > 0 && static_cast<int>(adj[i].size()) == d) out.push_back(static_cast<NodeId>(i));
        return out;
    }
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (std::size_t i = 0; i < adj.size(); ++i)
            for (NodeId y : adj[i])
                if (y > static_cast<NodeId>(i)) out.emplace_back(static_cast<NodeId>(i), y);
        return out;
    }
    void remove(NodeId u, NodeId v) {
        for (NodeId x : {u, v}) {
            for (NodeId y : adj[static_cast<std::size_t>(x)]) adj[static_cast<std::size_t>(y)].erase(x);
            adj[static_cast<std::size_t>(x)].clear();
        }
    }
};

// Every matching size reachable by MinGreedy (edge_rule=false) or
// 1-2-MinGreedy (edge_rule=true), by plain DFS over all choices.
inline void reachable_sizes(NaiveResidual r, bool edge_rule, std::size_t size, std::set<std::size_t>& out) {
    if (r.empty()) {
        out.insert(size);
        return;
    }
    std::vector<std::pair<NodeId, NodeId>> picks;
    if (edge_rule && r.min_deg() >= 3) {
        for (const Edge& e : r.edges()) picks.emplace_back(e.u, e.v);
    } else {
        for (NodeId u : r.min_nodes())
            for (NodeId v : r.adj[static_cast<std::size_t>(u)]) picks.emplace_back(u, v);
    }
    for (auto [u, v] : picks) {
        NaiveResidual next = r;
        next.remove(u, v);
        reachable_sizes(std::move(next), edge_rule, size + 1, out);
    }
}

inline std::size_t naive_worst(const Graph& g, bool edge_rule) {
    std::set<std::size_t> sizes;
    reachable_sizes(NaiveResidual(g), edge_rule, 0, sizes);
    return sizes.empty() ? 0 : *sizes.begin();
}

// Exact maximum matching size via a bitmask DP over nodes (n <= 20).
inline std::size_t max_matching_dp(const Graph& g) {
    const int n = g.n();
    std::vector<std::uint32_t> nb(static_cast<std::size_t>(n), 0);
    for (const Edge& e : g.edges()) {
        nb[static_cast<std::size_t>(e.u)] |= 1u << e.v;
        nb[static_cast<std::size_t>(e.v)] |= 1u << e.u;
    }
    std::vector<int> memo(std::size_t{1} << n, -1);
    std::function<int(std::uint32_t)> solve = [&](std::uint32_t free) -> int {
        if (free == 0) return 0;
        int& m = memo[free];
        if (m >= 0) return m;
        int x = __builtin_ctz(free);
        std::uint32_t rest = free & ~(1u << x);
        int best = solve(rest);
        for (std::uint32_t c = nb[static_cast<std::size_t>(x)] & rest; c; c &= c - 1) {
            int y = __builtin_ctz(c);
            best = std::max(best, 1 + solve(rest & ~(1u << y)));
        }
        return m = best;
    };
    return static_cast<std::size_t>(solve(n == 32 ? ~0u : ((1u << n) - 1)));
}

// Erdos-Renyi style graph with a degree cap, independent of the library generator.
inline Graph random_capped(NodeId n, int delta, double p, std::uint64_t seed) {
    matchforge::Rng rng(seed);
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (rng.bernoulli(p) && deg[static_cast<std::size_t>(u)] < delta && deg[static_cast<std::size_t>(v)] < delta) {
                edges.emplace_back(u, v);
                ++deg[static_cast<std::size_t>(u)];
                ++deg[static_cast<std::size_t>(v)];
            }
    return Graph(n, std::move(edges));
}

#ifdef MATCHFORGE_CLI
// Runs the command-line tool with `args` and returns its exit status. Output
// goes to `out_file` (or is discarded).
inline int run_cli(const std::string& args, const std::string& out_file = "") {
    std::string cmd = std::string("\"") + MATCHFORGE_CLI + "\" " + args;
    cmd += out_file.empty() ? " >/dev/null 2>&1" : " >\"" + out_file + "\" 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}
#endif

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("matchforge_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace oracle
