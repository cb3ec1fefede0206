#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/graph.hpp"
#include "matchforge/io.hpp"
#include "matchforge/residual.hpp"

namespace matchforge {

enum class Algo { min_greedy, one_two_min_greedy, karp_sipser, greedy, mrg, shuffle };

inline std::string algo_name(Algo a) {
    switch (a) {
        case Algo::min_greedy: return "mingreedy";
        case Algo::one_two_min_greedy: return "1-2-mingreedy";
        case Algo::karp_sipser: return "karpsipser";
        case Algo::greedy: return "greedy";
        case Algo::mrg: return "mrg";
        case Algo::shuffle: return "shuffle";
    }
    return "?";
}

inline Algo parse_algo(const std::string& s) {
    if (s == "mingreedy" || s == "min-greedy") return Algo::min_greedy;
    if (s == "1-2-mingreedy" || s == "12mingreedy" || s == "onetwo") return Algo::one_two_min_greedy;
    if (s == "karpsipser" || s == "karp-sipser" || s == "ks") return Algo::karp_sipser;
    if (s == "greedy") return Algo::greedy;
    if (s == "mrg") return Algo::mrg;
    if (s == "shuffle") return Algo::shuffle;
    throw InputError("unknown algorithm '" + s + "'");
}

// degree_rule: a node was chosen first and then one of its neighbors.
// free_edge: an edge was chosen directly; `selected` is its smaller endpoint.
enum class StepMode { degree_rule, free_edge };

inline std::string mode_name(StepMode m) { return m == StepMode::degree_rule ? "degree_rule" : "free_edge"; }

struct TraceStep {
    std::size_t index = 0;
    NodeId selected = kNoNode;
    int sel_degree = 0;
    NodeId partner = kNoNode;
    StepMode mode = StepMode::degree_rule;
    std::vector<Edge> removed;

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

// The graph is not owned; every consumer takes it alongside the trace.
struct RunTrace {
    Algo algo = Algo::min_greedy;
    std::vector<TraceStep> steps;
    Matching result;

    friend bool operator==(const RunTrace&, const RunTrace&) = default;
};

inline std::string format_trace(const RunTrace& t) {
    std::ostringstream os;
    os << "# algo " << algo_name(t.algo) << '\n';
    for (const TraceStep& s : t.steps) {
        os << "s " << s.index << ' ' << s.selected << ' ' << s.sel_degree << ' ' << s.partner << ' '
           << mode_name(s.mode) << '\n';
        for (const Edge& e : s.removed) os << "r " << e.u << ' ' << e.v << '\n';
    }
    return os.str();
}

// Reads the step records only. Call replay_trace to check them against a graph.
inline RunTrace parse_trace(const std::string& text) {
    RunTrace t;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::vector<Edge> picks;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = detail::trim(raw);
        if (s.empty()) continue;
        if (s[0] == '#') {
            auto tok = detail::split(s.substr(1));
            if (tok.size() == 2 && tok[0] == "algo") t.algo = parse_algo(tok[1]);
            continue;
        }
        auto tok = detail::split(s);
        if (tok[0] == "s") {
            if (tok.size() != 6) throw InputError(detail::at_line(line, "step line must be 's <idx> <u> <d> <v> <mode>'"));
            TraceStep st;
            st.index = static_cast<std::size_t>(detail::parse_count(tok[1], line));
            st.selected = static_cast<NodeId>(detail::parse_count(tok[2], line));
            st.sel_degree = static_cast<int>(detail::parse_count(tok[3], line));
            st.partner = static_cast<NodeId>(detail::parse_count(tok[4], line));
            if (tok[5] == "degree_rule") st.mode = StepMode::degree_rule;
            else if (tok[5] == "free_edge") st.mode = StepMode::free_edge;
            else throw InputError(detail::at_line(line, "unknown step mode '" + tok[5] + "'"));
            if (st.index != t.steps.size() + 1)
                throw InputError(detail::at_line(line, "step index " + std::to_string(st.index) + " out of sequence"));
            if (st.selected == st.partner) throw InputError(detail::at_line(line, "node matched to itself"));
            picks.emplace_back(st.selected, st.partner);
            t.steps.push_back(std::move(st));
        } else if (tok[0] == "r") {
            if (tok.size() != 3) throw InputError(detail::at_line(line, "removed-edge line must be 'r <a> <b>'"));
            if (t.steps.empty()) throw InputError(detail::at_line(line, "removed edge before any step"));
            NodeId a = static_cast<NodeId>(detail::parse_count(tok[1], line));
            NodeId b = static_cast<NodeId>(detail::parse_count(tok[2], line));
            if (a == b) throw InputError(detail::at_line(line, "self-loop in removed list"));
            t.steps.back().removed.emplace_back(a, b);
        } else {
            throw InputError(detail::at_line(line, "unknown record '" + tok[0] + "'"));
        }
    }
    t.result = Matching(picks);
    return t;
}

inline RunTrace load_trace(const std::string& path) { return parse_trace(detail::read_file(path)); }
inline void save_trace(const RunTrace& t, const std::string& path) { detail::write_file(path, format_trace(t)); }

// Replays the trace on a fresh view and checks every recorded fact: adjacency
// and liveness of each pick, the recorded selection degree, the exact removed
// lists, the result matching, and that nothing is alive at the end.
inline void replay_trace(const Graph& g, const RunTrace& t) {
    ResidualView view(g);
    std::vector<Edge> picks;
    for (const TraceStep& s : t.steps) {
        const std::string where = "step " + std::to_string(s.index) + ": ";
        if (s.selected < 0 || s.partner < 0 || s.selected >= g.n() || s.partner >= g.n())
            throw InputError(where + "node id out of range");
        if (!view.alive(s.selected, s.partner))
            throw InputError(where + "picked pair {" + std::to_string(s.selected) + "," +
                             std::to_string(s.partner) + "} is not an alive edge");
        if (view.degree(s.selected) != s.sel_degree)
            throw InputError(where + "recorded d(u)=" + std::to_string(s.sel_degree) + " but residual degree is " +
                             std::to_string(view.degree(s.selected)));
        auto removed = view.remove_pair(s.selected, s.partner);
        auto recorded = s.removed;
        std::sort(recorded.begin(), recorded.end());
        if (recorded != removed) throw InputError(where + "removed-edge list does not match the replay");
        picks.emplace_back(s.selected, s.partner);
    }
    if (!view.empty())
        throw InputError("trace ends with " + std::to_string(view.alive_edge_count()) + " alive edges");
    if (Matching(picks) != t.result) throw InputError("trace result does not equal the picked pairs");
}

// Checks that a replay-valid trace also follows the selection rule of `algo`
// (1-2-MinGreedy or MinGreedy). Returns an empty string when it does.
inline std::string check_min_degree_rule(const Graph& g, const RunTrace& t, Algo algo) {
    ResidualView view(g);
    for (const TraceStep& s : t.steps) {
        const int dmin = view.min_degree();
        const std::string where = "step " + std::to_string(s.index) + ": ";
        if (s.mode == StepMode::free_edge) {
            if (algo != Algo::one_two_min_greedy) return where + "free edge pick outside 1-2-MinGreedy";
            if (dmin < 3) return where + "free edge pick while minimum degree is " + std::to_string(dmin);
        } else if (view.degree(s.selected) != dmin) {
            return where + "selected node has degree " + std::to_string(view.degree(s.selected)) +
                   " but the minimum is " + std::to_string(dmin);
        }
        view.remove_pair(s.selected, s.partner);
    }
    return {};
}

}  // namespace matchforge
