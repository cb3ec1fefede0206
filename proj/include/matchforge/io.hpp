#pragma once

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/graph.hpp"

namespace matchforge {

namespace detail {

inline std::string trim(const std::string& s) {
    const char* ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::string at_line(int line, const std::string& msg) {
    return "line " + std::to_string(line) + ": " + msg;
}

// Parses a non-negative integer token; anything else is an input error.
inline long long parse_count(const std::string& tok, int line) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw InputError(at_line(line, "expected a non-negative integer, got '" + tok + "'"));
    try {
        return std::stoll(tok);
    } catch (const std::exception&) {
        throw InputError(at_line(line, "integer out of range: '" + tok + "'"));
    }
}

inline std::vector<std::string> split(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
    if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace detail

// Format:
//   # comment
//   graph <n> [<m>]
//   e <u> <v>
// The edge count on the header is optional; when present it must match.
inline Graph parse_graph(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool have_header = false;
    long long n = 0;
    long long declared_m = -1;
    int header_line = 0;
    std::vector<Edge> edges;
    std::vector<int> edge_lines;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = detail::trim(raw);
        if (s.empty() || s[0] == '#') continue;
        auto tok = detail::split(s);
        if (tok[0] == "graph") {
            if (have_header) throw InputError(detail::at_line(line, "second 'graph' header"));
            if (tok.size() != 2 && tok.size() != 3)
                throw InputError(detail::at_line(line, "header must be 'graph <n> [<m>]'"));
            n = detail::parse_count(tok[1], line);
            if (n > 100000000) throw InputError(detail::at_line(line, "node count too large"));
            if (tok.size() == 3) declared_m = detail::parse_count(tok[2], line);
            have_header = true;
            header_line = line;
        } else if (tok[0] == "e") {
            if (!have_header) throw InputError(detail::at_line(line, "edge before 'graph' header"));
            if (tok.size() != 3) throw InputError(detail::at_line(line, "edge line must be 'e <u> <v>'"));
            long long u = detail::parse_count(tok[1], line);
            long long v = detail::parse_count(tok[2], line);
            if (u >= n || v >= n)
                throw InputError(detail::at_line(line, "node id >= n (" + std::to_string(n) + ")"));
            if (u == v) throw InputError(detail::at_line(line, "self-loop at node " + std::to_string(u)));
            edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
            edge_lines.push_back(line);
        } else {
            throw InputError(detail::at_line(line, "unknown record '" + tok[0] + "'"));
        }
    }
    if (!have_header) throw InputError("missing 'graph <n>' header");
    if (declared_m >= 0 && declared_m != static_cast<long long>(edges.size()))
        throw InputError(detail::at_line(header_line, "header declares " + std::to_string(declared_m) +
                                                          " edges but " + std::to_string(edges.size()) +
                                                          " are listed"));
    // Report duplicates against the line of the second occurrence.
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (edges[order[i]] == edges[order[i - 1]])
            throw InputError(detail::at_line(edge_lines[order[i]], "duplicate edge {" +
                                                                        std::to_string(edges[order[i]].u) + "," +
                                                                        std::to_string(edges[order[i]].v) + "}"));
    }
    return Graph(static_cast<NodeId>(n), std::move(edges));
}

inline std::string format_graph(const Graph& g) {
    std::ostringstream os;
    os << "graph " << g.n() << ' ' << g.m() << '\n';
    for (const Edge& e : g.edges()) os << "e " << e.u << ' ' << e.v << '\n';
    return os.str();
}

inline Graph load_graph(const std::string& path) { return parse_graph(detail::read_file(path)); }
inline void save_graph(const Graph& g, const std::string& path) { detail::write_file(path, format_graph(g)); }

// Lines 'm <u> <v>'. Validated against g when one is supplied.
inline Matching parse_matching(const std::string& text, const Graph* g = nullptr) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    std::vector<Edge> pairs;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = detail::trim(raw);
        if (s.empty() || s[0] == '#') continue;
        auto tok = detail::split(s);
        if (tok[0] != "m" || tok.size() != 3)
            throw InputError(detail::at_line(line, "matching line must be 'm <u> <v>'"));
        long long u = detail::parse_count(tok[1], line);
        long long v = detail::parse_count(tok[2], line);
        if (u == v) throw InputError(detail::at_line(line, "node matched to itself"));
        if (g && (u >= g->n() || v >= g->n())) throw InputError(detail::at_line(line, "node id >= n"));
        pairs.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
    Matching m(pairs);
    if (m.size() != pairs.size()) throw InputError("matching lists a pair twice");
    if (g) validate_matching(*g, m);
    return m;
}

inline std::string format_matching(const Matching& m) {
    std::ostringstream os;
    for (const Edge& e : m.pairs()) os << "m " << e.u << ' ' << e.v << '\n';
    return os.str();
}

inline Matching load_matching(const std::string& path, const Graph* g = nullptr) {
    return parse_matching(detail::read_file(path), g);
}
inline void save_matching(const Matching& m, const std::string& path) {
    detail::write_file(path, format_matching(m));
}

}  // namespace matchforge
