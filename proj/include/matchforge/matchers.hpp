#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/graph.hpp"
#include "matchforge/policy.hpp"
#include "matchforge/residual.hpp"
#include "matchforge/trace.hpp"

namespace matchforge {

// The nondeterminism available to an algorithm in one step.
//   node_then_neighbor: choose one of `nodes`, then one of its alive neighbors.
//   edge:               choose one of `edges`; the smaller endpoint is "selected".
//   fixed:              no freedom at all (Shuffle).
struct StepChoices {
    enum class Kind { node_then_neighbor, edge, fixed };
    Kind kind = Kind::fixed;
    StepMode mode = StepMode::degree_rule;
    std::vector<NodeId> nodes;
    std::vector<EdgeId> edges;
    NodeId fixed_selected = kNoNode;
    NodeId fixed_partner = kNoNode;
};

inline void check_permutation(const std::vector<NodeId>& perm, NodeId n) {
    if (static_cast<NodeId>(perm.size()) != n) throw InputError("permutation length differs from node count");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (NodeId x : perm) {
        if (x < 0 || x >= n || seen[static_cast<std::size_t>(x)]) throw InputError("invalid permutation");
        seen[static_cast<std::size_t>(x)] = 1;
    }
}

// rank[x] = position of x in the permutation.
inline std::vector<std::size_t> permutation_rank(const std::vector<NodeId>& perm) {
    std::vector<std::size_t> rank(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) rank[static_cast<std::size_t>(perm[i])] = i;
    return rank;
}

inline StepChoices step_choices(const ResidualView& view, Algo algo, const std::vector<NodeId>* perm = nullptr) {
    StepChoices c;
    const int dmin = view.min_degree();
    auto all_edges = [&] {
        c.kind = StepChoices::Kind::edge;
        c.mode = StepMode::free_edge;
        c.edges = view.alive_edges();
    };
    auto nodes = [&](std::vector<NodeId> list) {
        c.kind = StepChoices::Kind::node_then_neighbor;
        c.mode = StepMode::degree_rule;
        c.nodes = std::move(list);
    };
    switch (algo) {
        case Algo::min_greedy: nodes(view.min_degree_nodes()); break;
        case Algo::one_two_min_greedy:
            if (dmin >= 3) all_edges();
            else nodes(view.min_degree_nodes());
            break;
        case Algo::karp_sipser:
            if (dmin == 1) nodes(view.nodes_of_degree(1));
            else all_edges();
            break;
        case Algo::greedy: all_edges(); break;
        case Algo::mrg: nodes(view.non_isolated_nodes()); break;
        case Algo::shuffle: {
            if (!perm) throw InputError("shuffle needs a permutation");
            c.kind = StepChoices::Kind::fixed;
            c.mode = StepMode::degree_rule;
            for (NodeId x : *perm) {
                if (view.degree(x) > 0) {
                    c.fixed_selected = x;
                    break;
                }
            }
            const auto rank = permutation_rank(*perm);
            for (NodeId y : view.alive_neighbors(c.fixed_selected)) {
                if (c.fixed_partner == kNoNode ||
                    rank[static_cast<std::size_t>(y)] < rank[static_cast<std::size_t>(c.fixed_partner)])
                    c.fixed_partner = y;
            }
            break;
        }
    }
    return c;
}

inline TraceStep apply_pick(ResidualView& view, std::size_t index, NodeId selected, NodeId partner, StepMode mode) {
    TraceStep st;
    st.index = index;
    st.selected = selected;
    st.partner = partner;
    st.sel_degree = view.degree(selected);
    st.mode = mode;
    st.removed = view.remove_pair(selected, partner);
    return st;
}

inline RunTrace run_algorithm(const Graph& g, Algo algo, const Policy& policy,
                              const std::vector<NodeId>* perm = nullptr) {
    if (algo == Algo::shuffle) {
        if (!perm) throw InputError("shuffle needs a permutation");
        check_permutation(*perm, g.n());
    }
    Chooser chooser(policy);
    ResidualView view(g);
    RunTrace trace;
    trace.algo = algo;
    std::vector<Edge> picks;
    std::size_t step = 0;
    while (!view.empty()) {
        ++step;
        StepChoices c = step_choices(view, algo, perm);
        NodeId u = kNoNode;
        NodeId v = kNoNode;
        switch (c.kind) {
            case StepChoices::Kind::node_then_neighbor: {
                u = c.nodes[chooser.choose(step, c.nodes.size())];
                auto nb = view.alive_neighbors(u);
                v = nb[chooser.choose(step, nb.size())];
                break;
            }
            case StepChoices::Kind::edge: {
                const Edge& e = g.edge(c.edges[chooser.choose(step, c.edges.size())]);
                u = e.u;
                v = e.v;
                break;
            }
            case StepChoices::Kind::fixed:
                u = c.fixed_selected;
                v = c.fixed_partner;
                break;
        }
        trace.steps.push_back(apply_pick(view, step, u, v, c.mode));
        picks.emplace_back(u, v);
    }
    chooser.finish();
    trace.result = Matching(picks);
    return trace;
}

inline RunTrace run_min_greedy(const Graph& g, const Policy& p) { return run_algorithm(g, Algo::min_greedy, p); }
inline RunTrace run_one_two_min_greedy(const Graph& g, const Policy& p) {
    return run_algorithm(g, Algo::one_two_min_greedy, p);
}
inline RunTrace run_karp_sipser(const Graph& g, const Policy& p) { return run_algorithm(g, Algo::karp_sipser, p); }
inline RunTrace run_greedy(const Graph& g, const Policy& p) { return run_algorithm(g, Algo::greedy, p); }
inline RunTrace run_mrg(const Graph& g, const Policy& p) { return run_algorithm(g, Algo::mrg, p); }
inline RunTrace run_shuffle(const Graph& g, const std::vector<NodeId>& perm) {
    return run_algorithm(g, Algo::shuffle, Policy::first(), &perm);
}

// Builds the script that makes `algo` reproduce the pick sequence of `t`
// (selected node and partner per step), or nullopt if some pick is not
// available to `algo` at that point.
inline std::optional<Policy> script_for_picks(const Graph& g, Algo algo, const std::vector<std::pair<NodeId, NodeId>>& picks) {
    ResidualView view(g);
    std::vector<ScriptEntry> script;
    std::size_t step = 0;
    for (auto [u, v] : picks) {
        ++step;
        if (view.empty() || !view.alive(u, v)) return std::nullopt;
        StepChoices c = step_choices(view, algo);
        switch (c.kind) {
            case StepChoices::Kind::node_then_neighbor: {
                auto it = std::find(c.nodes.begin(), c.nodes.end(), u);
                NodeId sel = u, par = v;
                if (it == c.nodes.end()) {
                    it = std::find(c.nodes.begin(), c.nodes.end(), v);
                    if (it == c.nodes.end()) return std::nullopt;
                    std::swap(sel, par);
                }
                if (c.nodes.size() > 1) script.push_back({step, static_cast<std::size_t>(it - c.nodes.begin())});
                auto nb = view.alive_neighbors(sel);
                auto jt = std::find(nb.begin(), nb.end(), par);
                if (nb.size() > 1) script.push_back({step, static_cast<std::size_t>(jt - nb.begin())});
                view.remove_pair(sel, par);
                break;
            }
            case StepChoices::Kind::edge: {
                EdgeId id = *view.base().find_edge(u, v);
                auto it = std::find(c.edges.begin(), c.edges.end(), id);
                if (c.edges.size() > 1) script.push_back({step, static_cast<std::size_t>(it - c.edges.begin())});
                view.remove_pair(u, v);
                break;
            }
            case StepChoices::Kind::fixed: return std::nullopt;
        }
    }
    if (!view.empty()) return std::nullopt;
    return Policy::scripted(std::move(script));
}

}  // namespace matchforge
