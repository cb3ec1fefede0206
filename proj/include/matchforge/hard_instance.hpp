#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/game.hpp"
#include "matchforge/graph.hpp"
#include "matchforge/io.hpp"
#include "matchforge/matchers.hpp"
#include "matchforge/trace.hpp"

namespace matchforge {

// Adversaries that build a hard instance while the game runs.
//
// Vocabulary for the constructions:
//   type 1 list: unknown node, d in [3, delta] neighbors, all unknown
//   type 2 list: unknown node, 2 unknown neighbors
//   type 3 list: unknown node, 2 unknown neighbors and 1 matched one
//   center: a, b, c, d, e, f with edges ab ae af ce cf cd bd (optimum 3)
//   triangle (l, m, r) hanging off a center through a connector u with
//   edges r-u, u-a, u-c; r is a frontier node that later triangles may
//   attach to with an edge m'-r.
//
// Single-center mode plays delta-3 regular rounds and then one closing
// round on the center. Multi-center mode is given a node budget t*delta up
// front, opens a new center whenever the previous one is closed, and spends
// the last nodes on K_{L,2} filler components.
//
// Node ids are bound lazily: a node gets an id only when it is first shown to
// the algorithm. Since unrevealed nodes are indistinguishable to it, the
// adversary may decide after evaluating the partner rule which internal node
// receives the chosen id.
class HardInstanceAdversary : public GameServer {
public:
    static HardInstanceAdversary single_center(int delta) { return HardInstanceAdversary(delta, 0); }
    static HardInstanceAdversary multi_center(int delta, int t) {
        if (t < 7) throw InputError("the multi-center adversary needs t >= 7");
        return HardInstanceAdversary(delta, t);
    }

    bool multi() const { return budget_ > 0; }
    int node_budget() const { return budget_; }
    std::size_t centers_opened() const { return centers_.size(); }
    std::size_t invariant_checks() const { return invariant_checks_; }

    std::optional<Served> serve(const PatternQuery& q, const Knowledge& k) override {
        built_.clear();
        if (!multi()) {
            if (phase_ == Phase::regular && round_ == delta_ - 3) phase_ = Phase::closing;
        } else if (phase_ == Phase::regular && static_cast<int>(nodes_.size()) >= budget_ - 6 * delta_) {
            build_fillers();
            phase_ = Phase::truthful;
        }
        ++round_;
        for (std::size_t pi = 0; pi < q.patterns.size(); ++pi) {
            const Pattern& p = q.patterns[pi];
            if (phase_ != Phase::truthful) {
                if (auto s = try_construct(p, pi, q, k)) return s;
            }
            if (auto s = try_frozen(p, pi, k)) return s;
        }
        if (any_live()) throw InputError("pattern list is not total: no pattern fits a remaining node");
        return std::nullopt;
    }

    void on_match(NodeId a, NodeId b) override {
        int ha = handle_of(a), hb = handle_of(b);
        if (ha < 0 || hb < 0) throw InternalError("match on an unrevealed id");
        if (expected_partner_ >= 0 && hb != expected_partner_)
            throw InternalError("algorithm picked a partner the adversary did not plan for");
        nodes_[static_cast<std::size_t>(ha)].matched = true;
        nodes_[static_cast<std::size_t>(hb)].matched = true;
        expected_partner_ = -1;
        if (after_match_) {
            auto f = std::move(after_match_);
            after_match_ = nullptr;
            f();
        }
        if (phase_ == Phase::regular) check_types();
    }

    Graph final_graph() const override {
        auto ids = final_ids();
        NodeId n = 0;
        for (NodeId x : ids) n = std::max(n, x + 1);
        if (multi() && n != budget_) throw InternalError("multi-center instance does not use the announced node count");
        std::vector<Edge> edges;
        for (std::size_t h = 0; h < nodes_.size(); ++h)
            for (int o : nodes_[h].adj)
                if (static_cast<std::size_t>(o) > h) edges.emplace_back(ids[h], ids[static_cast<std::size_t>(o)]);
        return Graph(n, std::move(edges));
    }

    NodeId final_id(std::int64_t h) const override { return final_ids()[static_cast<std::size_t>(h)]; }

private:
    enum class Phase { regular, closing, truthful };

    struct Node {
        std::vector<int> adj;
        NodeId id = kNoNode;
        bool matched = false;
        bool frozen = false;
    };

    struct Center {
        int a, b, c, d, e, f;
        bool active = true;
        std::vector<int> frontiers;
        std::vector<int> members;
    };

    HardInstanceAdversary(int delta, int t) : delta_(delta), budget_(t * delta) {
        if (delta < 3) throw InputError("hard-instance adversaries need delta >= 3");
    }

    // ---- graph building -------------------------------------------------

    int add_node() {
        nodes_.push_back({});
        return static_cast<int>(nodes_.size()) - 1;
    }

    void add_edge(int x, int y) {
        auto& nx = nodes_[static_cast<std::size_t>(x)];
        auto& ny = nodes_[static_cast<std::size_t>(y)];
        if (x == y || std::find(nx.adj.begin(), nx.adj.end(), y) != nx.adj.end())
            throw InternalError("adversary tried to add a loop or a parallel edge");
        if (static_cast<int>(nx.adj.size()) >= delta_ || static_cast<int>(ny.adj.size()) >= delta_)
            throw InternalError("adversary tried to exceed the degree bound");
        nx.adj.push_back(y);
        ny.adj.push_back(x);
        built_.emplace_back(x, y);
    }

    int deg(int h) const { return static_cast<int>(nodes_[static_cast<std::size_t>(h)].adj.size()); }
    bool known(int h) const { return nodes_[static_cast<std::size_t>(h)].id != kNoNode; }
    bool matched(int h) const { return nodes_[static_cast<std::size_t>(h)].matched; }

    bool live(int h) const {
        const Node& n = nodes_[static_cast<std::size_t>(h)];
        if (n.matched) return false;
        return std::any_of(n.adj.begin(), n.adj.end(), [&](int o) { return !matched(o); });
    }
    bool any_live() const {
        for (std::size_t h = 0; h < nodes_.size(); ++h)
            if (live(static_cast<int>(h))) return true;
        return false;
    }

    int open_center() {
        Center c{};
        c.a = add_node();
        c.b = add_node();
        c.c = add_node();
        c.d = add_node();
        c.e = add_node();
        c.f = add_node();
        c.members = {c.a, c.b, c.c, c.d, c.e, c.f};
        add_edge(c.a, c.b);
        add_edge(c.a, c.e);
        add_edge(c.a, c.f);
        add_edge(c.c, c.e);
        add_edge(c.c, c.f);
        add_edge(c.c, c.d);
        add_edge(c.b, c.d);
        centers_.push_back(c);
        active_ = static_cast<int>(centers_.size()) - 1;
        return active_;
    }

    Center& center() { return centers_[static_cast<std::size_t>(active_)]; }
    int center_degree() { return deg(center().a); }

    void close_center() {
        for (int h : center().members) nodes_[static_cast<std::size_t>(h)].frozen = true;
        center().active = false;
        active_ = -1;
    }

    std::optional<int> frontier_with_capacity() {
        if (active_ < 0) return std::nullopt;
        for (int r : center().frontiers)
            if (deg(r) < delta_) return r;
        return std::nullopt;
    }

    // ---- ids ------------------------------------------------------------

    int id_limit() const { return multi() ? budget_ : INT32_MAX; }

    bool id_free(NodeId x) const {
        if (x < 0 || x >= id_limit()) return false;
        auto i = static_cast<std::size_t>(x);
        return i >= id_used_.size() || !id_used_[i];
    }

    NodeId take_id(std::optional<NodeId> wanted) {
        NodeId x = 0;
        if (wanted) {
            if (!id_free(*wanted)) throw InternalError("requested id is taken");
            x = *wanted;
        } else {
            while (!id_free(x)) {
                if (++x >= id_limit()) throw InternalError("ran out of node ids");
            }
        }
        auto i = static_cast<std::size_t>(x);
        if (i >= id_used_.size()) id_used_.resize(i + 1, 0);
        id_used_[i] = 1;
        return x;
    }

    void bind(int h, NodeId x) {
        nodes_[static_cast<std::size_t>(h)].id = x;
        if (static_cast<std::size_t>(x) >= by_id_.size()) by_id_.resize(static_cast<std::size_t>(x) + 1, -1);
        by_id_[static_cast<std::size_t>(x)] = h;
    }

    int handle_of(NodeId x) const {
        auto i = static_cast<std::size_t>(x);
        return i < by_id_.size() ? by_id_[i] : -1;
    }

    std::vector<NodeId> final_ids() const {
        std::vector<NodeId> ids(nodes_.size());
        std::vector<char> used = id_used_;
        NodeId next = 0;
        auto is_used = [&](NodeId x) { return static_cast<std::size_t>(x) < used.size() && used[static_cast<std::size_t>(x)]; };
        for (std::size_t h = 0; h < nodes_.size(); ++h) {
            if (nodes_[h].id != kNoNode) {
                ids[h] = nodes_[h].id;
                continue;
            }
            while (is_used(next)) ++next;
            ids[h] = next++;
        }
        return ids;
    }

    bool node_constraint_ok(const Pattern& p, int h) const {
        if (!p.node) return true;
        return known(h) ? nodes_[static_cast<std::size_t>(h)].id == *p.node : id_free(*p.node);
    }

    // Reveals handle h with its full list. Unknown neighbors get fresh ids;
    // when `want_partner` is set, the id the partner rule picks among them is
    // bound to that handle.
    Served reveal(int h, const Pattern& p, std::size_t pi, const PatternQuery& q, const Knowledge& k,
                  int want_partner) {
        Node& n = nodes_[static_cast<std::size_t>(h)];
        if (n.id == kNoNode) bind(h, take_id(p.node));
        std::vector<int> unknown_nbrs, known_nbrs;
        for (int o : n.adj) (known(o) ? known_nbrs : unknown_nbrs).push_back(o);
        std::vector<NodeId> fresh;
        for (std::size_t i = 0; i < unknown_nbrs.size(); ++i) fresh.push_back(take_id(std::nullopt));
        DataItem item;
        item.node = n.id;
        item.neighbors = fresh;
        for (int o : known_nbrs) item.neighbors.push_back(nodes_[static_cast<std::size_t>(o)].id);
        if (want_partner >= 0) {
            NodeId pick = choose_partner(item, k, p.rule, q);
            auto it = std::find(fresh.begin(), fresh.end(), pick);
            if (it == fresh.end()) throw InternalError("partner rule picked a revealed node");
            auto wp = std::find(unknown_nbrs.begin(), unknown_nbrs.end(), want_partner);
            if (wp == unknown_nbrs.end()) throw InternalError("planned partner is not an unknown neighbor");
            std::iter_swap(wp, unknown_nbrs.begin() + (it - fresh.begin()));
            expected_partner_ = want_partner;
        } else {
            expected_partner_ = -1;
        }
        for (std::size_t i = 0; i < unknown_nbrs.size(); ++i) bind(unknown_nbrs[i], fresh[i]);
        Served s;
        s.item = std::move(item);
        s.pattern = pi;
        for (auto [a, b] : built_) s.built.emplace_back(a, b);
        return s;
    }

    // ---- constructions ---------------------------------------------------

    static ItemShape shape(int d, int unknown, int matched_cnt) {
        ItemShape s;
        s.degree = d;
        s.unknown = unknown;
        s.matched = matched_cnt;
        s.self_known = false;
        return s;
    }

    std::optional<Served> try_construct(const Pattern& p, std::size_t pi, const PatternQuery& q, const Knowledge& k) {
        const bool closing = phase_ == Phase::closing;
        if (p.node && !id_free(*p.node)) return std::nullopt;

        // Type 1.
        if (closing) {
            if (active_ < 0) open_center();
            if (shape_fits(p, shape(center_degree(), center_degree(), 0))) return close_with_a(p, pi, q, k);
        } else {
            for (int d = 3; d <= delta_; ++d) {
                if (!shape_fits(p, shape(d, d, 0))) continue;
                if (multi() && d == delta_ && active_ >= 0 && center_degree() == delta_)
                    return close_with_a(p, pi, q, k);
                return build_star_pair(d, p, pi, q, k);
            }
        }
        // Type 2.
        if (shape_fits(p, shape(2, 2, 0))) {
            if (active_ < 0) open_center();
            if (closing || (multi() && center_degree() == delta_)) return close_with_b(p, pi, q, k, std::nullopt);
            return attach_triangle(std::nullopt, p, pi, q, k);
        }
        // Type 3.
        if (shape_fits(p, shape(3, 2, 1))) {
            if (auto r = frontier_with_capacity()) {
                if (closing || (multi() && center_degree() == delta_)) return close_with_b(p, pi, q, k, *r);
                return attach_triangle(*r, p, pi, q, k);
            }
        }
        return std::nullopt;
    }

    // v and v1 adjacent and both adjacent to v2..vd; the algorithm gets v-v1
    // while v-v2 and v1-vd would have been two edges.
    Served build_star_pair(int d, const Pattern& p, std::size_t pi, const PatternQuery& q, const Knowledge& k) {
        int v = add_node();
        std::vector<int> others;
        for (int i = 0; i < d; ++i) others.push_back(add_node());
        const int v1 = others[0];
        for (int o : others) add_edge(v, o);
        for (std::size_t i = 1; i < others.size(); ++i) add_edge(v1, others[i]);
        for (int h : others) nodes_[static_cast<std::size_t>(h)].frozen = true;
        nodes_[static_cast<std::size_t>(v)].frozen = true;
        return reveal(v, p, pi, q, k, v1);
    }

    // New triangle (l, m, r) with connector u to a and c; m is served and the
    // algorithm takes m-r. With a frontier given, m is also tied to it.
    Served attach_triangle(std::optional<int> frontier, const Pattern& p, std::size_t pi, const PatternQuery& q,
                           const Knowledge& k) {
        Center& c = center();
        int l = add_node(), m = add_node(), r = add_node(), u = add_node();
        add_edge(m, r);
        add_edge(m, l);
        add_edge(l, r);
        add_edge(r, u);
        add_edge(u, c.a);
        add_edge(u, c.c);
        if (frontier) add_edge(m, *frontier);
        for (int h : {l, m, r, u}) c.members.push_back(h);
        c.frontiers.push_back(r);
        return reveal(m, p, pi, q, k, r);
    }

    // Serve a (degree delta of the center, all unknown); the algorithm takes a-b.
    Served close_with_a(const Pattern& p, std::size_t pi, const PatternQuery& q, const Knowledge& k) {
        Center& c = center();
        int a = c.a, b = c.b;
        after_match_ = [this] { after_close(); };
        return reveal(a, p, pi, q, k, b);
    }

    // Serve b with list <a, d> (plus a frontier when given); the algorithm takes b-a.
    Served close_with_b(const Pattern& p, std::size_t pi, const PatternQuery& q, const Knowledge& k,
                        std::optional<int> frontier) {
        Center& c = center();
        if (frontier) {
            add_edge(c.b, *frontier);
        }
        int a = c.a, b = c.b;
        after_match_ = [this] { after_close(); };
        return reveal(b, p, pi, q, k, a);
    }

    void after_close() {
        close_center();
        if (!multi()) phase_ = Phase::truthful;
    }

    // K_{L,2} components for the remaining budget, L in [2, delta], as large
    // as possible. Triangles cover sizes that cannot be split that way.
    void build_fillers() {
        if (active_ >= 0) close_center();
        int nu = budget_ - static_cast<int>(nodes_.size());
        if (nu < 0) throw InternalError("node budget overrun");
        std::vector<int> sizes = filler_sizes(nu, delta_);
        for (int s : sizes) {
            if (s == 3) {
                int x = add_node(), y = add_node(), z = add_node();
                add_edge(x, y);
                add_edge(y, z);
                add_edge(x, z);
                for (int h : {x, y, z}) nodes_[static_cast<std::size_t>(h)].frozen = true;
                continue;
            }
            int r1 = add_node(), r2 = add_node();
            nodes_[static_cast<std::size_t>(r1)].frozen = nodes_[static_cast<std::size_t>(r2)].frozen = true;
            for (int i = 0; i < s - 2; ++i) {
                int l = add_node();
                nodes_[static_cast<std::size_t>(l)].frozen = true;
                add_edge(l, r1);
                add_edge(l, r2);
            }
        }
        if (static_cast<int>(nodes_.size()) != budget_) throw InternalError("fillers missed the node budget");
        for (auto& n : nodes_) n.frozen = true;
    }

public:
    // Component sizes summing to nu: K_{L,2} has L+2 nodes with 2 <= L <= delta.
    // Uses the fewest components, largest first; falls back to triangles when
    // no such split exists.
    static std::vector<int> filler_sizes(int nu, int delta) {
        const int lo = 4, hi = delta + 2;
        for (int triangles = 0; 3 * triangles <= nu; ++triangles) {
            int rest = nu - 3 * triangles;
            std::vector<int> out;
            if (rest > 0) {
                int c = (rest + hi - 1) / hi;
                if (lo * c > rest) continue;
                for (int i = 0; i < c; ++i) {
                    int s = std::min(hi, rest - lo * (c - i - 1));
                    out.push_back(s);
                    rest -= s;
                }
            }
            for (int i = 0; i < triangles; ++i) out.push_back(3);
            return out;
        }
        throw InternalError("no filler split for " + std::to_string(nu) + " nodes");
    }

private:
    // ---- truthful part -----------------------------------------------------

    std::optional<Served> try_frozen(const Pattern& p, std::size_t pi, const Knowledge& k) {
        for (std::size_t h = 0; h < nodes_.size(); ++h) {
            const int hh = static_cast<int>(h);
            const Node& n = nodes_[h];
            if (!n.frozen || !live(hh) || !node_constraint_ok(p, hh)) continue;
            ItemShape s;
            s.degree = deg(hh);
            s.self_known = known(hh);
            for (int o : n.adj) {
                if (matched(o)) ++s.matched;
                else if (known(o)) ++s.known_unmatched;
                else ++s.unknown;
            }
            if (!shape_fits(p, s)) continue;
            PatternQuery dummy;
            return reveal(hh, p, pi, dummy, k, -1);
        }
        return std::nullopt;
    }

    // Every unfrozen node that is still live must show a list of type 1, 2, or 3.
    void check_types() {
        ++invariant_checks_;
        for (std::size_t h = 0; h < nodes_.size(); ++h) {
            const int hh = static_cast<int>(h);
            if (nodes_[h].frozen || !live(hh)) continue;
            if (known(hh)) throw InternalError("live node was already revealed");
            int unknown = 0, matched_cnt = 0, other = 0;
            for (int o : nodes_[h].adj) {
                if (matched(o) && known(o)) ++matched_cnt;
                else if (!known(o)) ++unknown;
                else ++other;
            }
            const int d = deg(hh);
            bool t1 = d >= 3 && d <= delta_ && unknown == d;
            bool t2 = d == 2 && unknown == 2;
            bool t3 = d == 3 && unknown == 2 && matched_cnt == 1;
            if (other || !(t1 || t2 || t3))
                throw InternalError("live node list is not of type 1, 2 or 3");
        }
    }

    int delta_;
    int budget_;
    Phase phase_ = Phase::regular;
    int round_ = 0;
    std::vector<Node> nodes_;
    std::vector<Center> centers_;
    int active_ = -1;
    std::vector<char> id_used_;
    std::vector<int> by_id_;
    std::vector<std::pair<int, int>> built_;
    int expected_partner_ = -1;
    std::function<void()> after_match_;
    std::size_t invariant_checks_ = 0;
};

struct EmittedGame {
    std::vector<std::string> files;
    bool has_trace = false;
};

// Writes <prefix>.graph, <prefix>.script (one "p <served> <partner>" line per
// round), <prefix>.transcript and, when MinGreedy can reproduce the picks,
// <prefix>.trace with that run.
inline EmittedGame emit_game(const GameResult& r, const std::string& prefix) {
    EmittedGame out;
    save_graph(r.graph, prefix + ".graph");
    out.files.push_back(prefix + ".graph");
    std::string script;
    for (auto [a, b] : r.picks) script += "p " + std::to_string(a) + " " + std::to_string(b) + "\n";
    detail::write_file(prefix + ".script", script);
    out.files.push_back(prefix + ".script");
    detail::write_file(prefix + ".transcript", r.transcript);
    out.files.push_back(prefix + ".transcript");
    if (auto pol = script_for_picks(r.graph, Algo::min_greedy, r.picks)) {
        save_trace(run_algorithm(r.graph, Algo::min_greedy, *pol), prefix + ".trace");
        out.files.push_back(prefix + ".trace");
        out.has_trace = true;
    }
    return out;
}

}  // namespace matchforge
