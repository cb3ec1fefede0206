#pragma once

#include <algorithm>
#include <climits>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/graph.hpp"

namespace matchforge {

struct CountRange {
    int lo = 0;
    int hi = INT_MAX;

    static CountRange any() { return {}; }
    static CountRange exactly(int x) { return {x, x}; }
    static CountRange at_least(int x) { return {x, INT_MAX}; }
    bool contains(int x) const { return lo <= x && x <= hi; }
    bool unconstrained() const { return lo == 0 && hi == INT_MAX; }

    std::string str() const {
        if (lo == hi) return std::to_string(lo);
        if (hi == INT_MAX) return ">=" + std::to_string(lo);
        return std::to_string(lo) + ".." + std::to_string(hi);
    }
};

// How the algorithm picks the partner of a served node among its neighbors
// that are not matched yet.
enum class PartnerRule {
    first_unmatched,  // first such neighbor in list order
    first_unknown,    // first never-revealed one, else first_unmatched
    lowest_rank,      // smallest rank in the query's rank table
};

// A class of adjacency lists. Neighbors are counted per knowledge class:
// matched, known but unmatched, and unknown (never revealed). "unmatched" is
// the sum of the last two, i.e. the residual degree.
struct Pattern {
    std::string label;
    CountRange degree;
    CountRange unmatched;
    CountRange matched;
    CountRange known_unmatched;
    CountRange unknown;
    std::optional<bool> self_known;
    std::optional<NodeId> node;
    PartnerRule rule = PartnerRule::first_unmatched;

    bool catch_all() const {
        return degree.unconstrained() && unmatched.unconstrained() && matched.unconstrained() &&
               known_unmatched.unconstrained() && unknown.unconstrained() && !self_known && !node;
    }
};

// Flag counts of a concrete or hypothetical adjacency list.
struct ItemShape {
    int degree = 0;
    int matched = 0;
    int known_unmatched = 0;
    int unknown = 0;
    bool self_known = false;
    int unmatched() const { return known_unmatched + unknown; }
};

inline bool shape_fits(const Pattern& p, const ItemShape& s) {
    return p.degree.contains(s.degree) && p.unmatched.contains(s.unmatched()) && p.matched.contains(s.matched) &&
           p.known_unmatched.contains(s.known_unmatched) && p.unknown.contains(s.unknown) &&
           (!p.self_known || *p.self_known == s.self_known);
}

struct PatternQuery {
    std::vector<Pattern> patterns;
    std::vector<std::size_t> rank;  // by node id, for lowest_rank

    std::size_t rank_of(NodeId x) const {
        auto i = static_cast<std::size_t>(x);
        return i < rank.size() ? rank[i] : SIZE_MAX;
    }

    void validate() const {
        if (patterns.empty() || !patterns.back().catch_all())
            throw InputError("pattern list is not total: the last pattern must accept every adjacency list");
    }

    std::string describe(std::size_t limit = 4) const {
        std::string out;
        for (std::size_t i = 0; i < patterns.size() && i < limit; ++i) {
            if (i) out += " | ";
            out += patterns[i].label;
        }
        if (patterns.size() > limit) out += " | ... (" + std::to_string(patterns.size()) + " patterns)";
        return out;
    }
};

struct DataItem {
    NodeId node = kNoNode;
    std::vector<NodeId> neighbors;
};

// What the algorithm has seen: revealed node ids and its own matched nodes.
class Knowledge {
public:
    bool known(NodeId x) const { return get(known_, x); }
    bool matched(NodeId x) const { return get(matched_, x); }
    void reveal(const DataItem& item) {
        set(known_, item.node);
        for (NodeId y : item.neighbors) set(known_, y);
    }
    void match(NodeId a, NodeId b) {
        set(matched_, a);
        set(matched_, b);
    }

    ItemShape shape_of(const DataItem& item) const {
        ItemShape s;
        s.degree = static_cast<int>(item.neighbors.size());
        s.self_known = known(item.node);
        for (NodeId y : item.neighbors) {
            if (matched(y)) ++s.matched;
            else if (known(y)) ++s.known_unmatched;
            else ++s.unknown;
        }
        return s;
    }

private:
    static bool get(const std::vector<char>& v, NodeId x) {
        auto i = static_cast<std::size_t>(x);
        return i < v.size() && v[i];
    }
    static void set(std::vector<char>& v, NodeId x) {
        auto i = static_cast<std::size_t>(x);
        if (i >= v.size()) v.resize(i + 1, 0);
        v[i] = 1;
    }
    std::vector<char> known_;
    std::vector<char> matched_;
};

inline bool item_fits(const Pattern& p, const DataItem& item, const Knowledge& k) {
    if (p.node && *p.node != item.node) return false;
    return shape_fits(p, k.shape_of(item));
}

inline NodeId choose_partner(const DataItem& item, const Knowledge& k, PartnerRule rule, const PatternQuery& q) {
    NodeId first = kNoNode;
    NodeId first_unknown = kNoNode;
    NodeId best_rank = kNoNode;
    for (NodeId y : item.neighbors) {
        if (k.matched(y)) continue;
        if (first == kNoNode) first = y;
        if (first_unknown == kNoNode && !k.known(y)) first_unknown = y;
        if (best_rank == kNoNode || q.rank_of(y) < q.rank_of(best_rank)) best_rank = y;
    }
    switch (rule) {
        case PartnerRule::first_unmatched: return first;
        case PartnerRule::first_unknown: return first_unknown != kNoNode ? first_unknown : first;
        case PartnerRule::lowest_rank: return best_rank;
    }
    return first;
}

// The algorithm side of the game.
class PriorityAlgorithm {
public:
    virtual ~PriorityAlgorithm() = default;
    virtual std::string name() const = 0;
    virtual PatternQuery query(const Knowledge& k) const = 0;
};

// A query that never changes over the course of the game.
class StaticPriority : public PriorityAlgorithm {
public:
    StaticPriority(std::string name, PatternQuery q) : name_(std::move(name)), q_(std::move(q)) { q_.validate(); }
    std::string name() const override { return name_; }
    PatternQuery query(const Knowledge&) const override { return q_; }

private:
    std::string name_;
    PatternQuery q_;
};

inline Pattern catch_all_pattern(PartnerRule rule = PartnerRule::first_unmatched) {
    Pattern p;
    p.label = "*";
    p.rule = rule;
    return p;
}

// Lists with exactly i unmatched neighbors rank above those with i+1, for
// i = 1..degree_cap; the catch-all covers anything above the cap.
inline std::unique_ptr<PriorityAlgorithm> encode_min_greedy(int degree_cap) {
    PatternQuery q;
    for (int i = 1; i <= degree_cap; ++i) {
        Pattern p;
        p.label = "unmatched=" + std::to_string(i);
        p.unmatched = CountRange::exactly(i);
        q.patterns.push_back(p);
    }
    q.patterns.push_back(catch_all_pattern());
    return std::make_unique<StaticPriority>("mingreedy", std::move(q));
}

inline std::unique_ptr<PriorityAlgorithm> encode_karp_sipser() {
    PatternQuery q;
    Pattern p;
    p.label = "unmatched=1";
    p.unmatched = CountRange::exactly(1);
    q.patterns.push_back(p);
    q.patterns.push_back(catch_all_pattern());
    return std::make_unique<StaticPriority>("karpsipser", std::move(q));
}

// Greedy and MRG leave every choice to the order of presentation.
inline std::unique_ptr<PriorityAlgorithm> encode_greedy(const std::string& name = "greedy") {
    PatternQuery q;
    q.patterns.push_back(catch_all_pattern());
    return std::make_unique<StaticPriority>(name, std::move(q));
}

// Node lists in the order of `perm`, each matched to its unmatched neighbor of
// smallest rank in `perm`.
inline std::unique_ptr<PriorityAlgorithm> encode_shuffle(const std::vector<NodeId>& perm,
                                                         const std::string& name = "shuffle") {
    PatternQuery q;
    q.rank.assign(perm.size(), SIZE_MAX);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        auto x = static_cast<std::size_t>(perm[i]);
        if (x >= q.rank.size()) q.rank.resize(x + 1, SIZE_MAX);
        q.rank[x] = i;
        Pattern p;
        p.label = "node=" + std::to_string(perm[i]);
        p.node = perm[i];
        p.rule = PartnerRule::lowest_rank;
        q.patterns.push_back(p);
    }
    q.patterns.push_back(catch_all_pattern(PartnerRule::lowest_rank));
    return std::make_unique<StaticPriority>(name, std::move(q));
}

inline std::vector<NodeId> identity_permutation(NodeId n) {
    std::vector<NodeId> p(static_cast<std::size_t>(n));
    for (NodeId i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    return p;
}

// Ids: mingreedy, karpsipser, greedy, mrg, shuffle, vertex_iterative. The
// permutation is used by shuffle and vertex_iterative (identity if empty,
// sized by `n_hint`).
inline std::unique_ptr<PriorityAlgorithm> encode_priority(const std::string& id, int degree_cap = 64,
                                                          std::vector<NodeId> perm = {}, NodeId n_hint = 0) {
    if (id == "mingreedy") return encode_min_greedy(degree_cap);
    if (id == "karpsipser") return encode_karp_sipser();
    if (id == "greedy") return encode_greedy("greedy");
    if (id == "mrg") return encode_greedy("mrg");
    if (id == "shuffle" || id == "vertex_iterative") {
        if (perm.empty()) perm = identity_permutation(n_hint);
        return encode_shuffle(perm, id);
    }
    throw InputError("no priority encoding for '" + id + "'");
}

// The adversary side. `handle`s are the server's internal node names; they
// are mapped to ids only when the game is over.
class GameServer {
public:
    struct Served {
        DataItem item;
        std::size_t pattern = 0;
        std::vector<std::pair<std::int64_t, std::int64_t>> built;  // edges added this round, by handle
    };
    virtual ~GameServer() = default;
    virtual std::optional<Served> serve(const PatternQuery& q, const Knowledge& k) = 0;
    virtual void on_match(NodeId selected, NodeId partner) = 0;
    virtual Graph final_graph() const = 0;
    virtual NodeId final_id(std::int64_t handle) const = 0;
};

struct GameResult {
    Graph graph;
    Matching matching;
    std::vector<std::pair<NodeId, NodeId>> picks;  // (served node, partner) in order
    std::vector<DataItem> served;
    std::string transcript;
};

inline GameResult play_game(const PriorityAlgorithm& algo, GameServer& server, int delta) {
    if (delta < 1) throw InputError("delta must be positive");
    Knowledge k;
    GameResult out;
    struct Round {
        std::string q;
        std::vector<std::pair<std::int64_t, std::int64_t>> built;
        DataItem item;
        NodeId partner;
    };
    std::vector<Round> rounds;
    for (;;) {
        PatternQuery q = algo.query(k);
        q.validate();
        auto served = server.serve(q, k);
        if (!served) break;
        const DataItem& item = served->item;
        if (served->pattern >= q.patterns.size() || !item_fits(q.patterns[served->pattern], item, k))
            throw InternalError("served item does not fit the claimed pattern");
        for (std::size_t i = 0; i < served->pattern; ++i)
            if (item_fits(q.patterns[i], item, k))
                throw InternalError("served item fits a higher ranked pattern");
        NodeId partner = choose_partner(item, k, q.patterns[served->pattern].rule, q);
        if (k.matched(item.node) || partner == kNoNode) throw InternalError("served node is matched or isolated");
        k.reveal(item);
        k.match(item.node, partner);
        server.on_match(item.node, partner);
        out.picks.emplace_back(item.node, partner);
        out.served.push_back(item);
        rounds.push_back({q.describe(), served->built, item, partner});
    }
    out.graph = server.final_graph();
    std::vector<Edge> pairs;
    for (auto [a, b] : out.picks) pairs.emplace_back(a, b);
    out.matching = Matching(pairs);
    if (out.matching.size() != pairs.size()) throw InternalError("game matched a pair twice");
    validate_matching(out.graph, out.matching);
    if (out.graph.delta() > delta) throw InternalError("game graph exceeds the degree bound");
    if (!is_maximal(out.graph, out.matching)) throw InternalError("game ended with a non-isolated unmatched node");
    for (const DataItem& item : out.served) {
        auto a = item.neighbors;
        std::sort(a.begin(), a.end());
        if (a != out.graph.neighbors(item.node)) throw InternalError("served list differs from the final graph");
    }
    std::ostringstream os;
    for (const Round& r : rounds) {
        os << "q " << r.q << '\n';
        if (!r.built.empty()) {
            os << "build";
            for (auto [a, b] : r.built) os << ' ' << server.final_id(a) << '-' << server.final_id(b);
            os << '\n';
        }
        os << "serve " << r.item.node;
        for (NodeId y : r.item.neighbors) os << ' ' << y;
        os << '\n';
        os << "match " << r.item.node << ' ' << r.partner << '\n';
    }
    out.transcript = os.str();
    return out;
}

// Serves a fixed, fully specified graph: the highest ranked pattern that some
// non-isolated node fits, the smallest such node id, neighbors ascending.
class TruthfulServer : public GameServer {
public:
    explicit TruthfulServer(Graph g) : g_(std::move(g)), matched_(static_cast<std::size_t>(g_.n()), 0) {}

    std::optional<Served> serve(const PatternQuery& q, const Knowledge& k) override {
        std::vector<NodeId> live;
        for (NodeId x = 0; x < g_.n(); ++x) {
            if (matched_[static_cast<std::size_t>(x)]) continue;
            for (const Incidence& inc : g_.incident(x))
                if (!matched_[static_cast<std::size_t>(inc.neighbor)]) {
                    live.push_back(x);
                    break;
                }
        }
        if (live.empty()) return std::nullopt;
        for (std::size_t pi = 0; pi < q.patterns.size(); ++pi) {
            const Pattern& p = q.patterns[pi];
            if (p.node) {
                NodeId x = *p.node;
                if (x < 0 || x >= g_.n() || !std::binary_search(live.begin(), live.end(), x)) continue;
                DataItem item{x, g_.neighbors(x)};
                if (item_fits(p, item, k)) return Served{item, pi, {}};
                continue;
            }
            for (NodeId x : live) {
                DataItem item{x, g_.neighbors(x)};
                if (item_fits(p, item, k)) return Served{item, pi, {}};
            }
        }
        throw InputError("pattern list is not total: no pattern fits a remaining node");
    }

    void on_match(NodeId a, NodeId b) override {
        matched_[static_cast<std::size_t>(a)] = 1;
        matched_[static_cast<std::size_t>(b)] = 1;
    }
    Graph final_graph() const override { return g_; }
    NodeId final_id(std::int64_t h) const override { return static_cast<NodeId>(h); }

private:
    Graph g_;
    std::vector<char> matched_;
};

}  // namespace matchforge
