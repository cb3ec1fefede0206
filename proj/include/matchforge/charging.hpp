#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "matchforge/decomposition.hpp"
#include "matchforge/error.hpp"
#include "matchforge/graph.hpp"
#include "matchforge/rational.hpp"
#include "matchforge/trace.hpp"

namespace matchforge {

// Per-step facts of a run that every part of the accounting needs: when each
// edge died, when each node was matched, and residual degrees at any step.
class RunHistory {
public:
    RunHistory(const Graph& g, const RunTrace& t)
        : g_(&g),
          trace_(&t),
          removed_at_(g.m(), 0),
          matched_at_(static_cast<std::size_t>(g.n()), 0),
          drops_(static_cast<std::size_t>(g.n())) {
        for (const TraceStep& s : t.steps) {
            matched_at_[static_cast<std::size_t>(s.selected)] = s.index;
            matched_at_[static_cast<std::size_t>(s.partner)] = s.index;
            for (const Edge& e : s.removed) {
                auto id = g.find_edge(e.u, e.v);
                if (!id) throw InputError("trace removes a non-edge");
                removed_at_[static_cast<std::size_t>(*id)] = s.index;
                drops_[static_cast<std::size_t>(e.u)].push_back(s.index);
                drops_[static_cast<std::size_t>(e.v)].push_back(s.index);
            }
        }
        for (auto& d : drops_) std::sort(d.begin(), d.end());
    }

    std::size_t steps() const { return trace_->steps.size(); }
    const TraceStep& step(std::size_t s) const { return trace_->steps.at(s - 1); }

    // Residual degree at the start of step s (s = steps()+1 means "at the end").
    int deg_before(NodeId x, std::size_t s) const {
        const auto& d = drops_[static_cast<std::size_t>(x)];
        auto removed = std::lower_bound(d.begin(), d.end(), s) - d.begin();
        return g_->degree(x) - static_cast<int>(removed);
    }
    int deg_after(NodeId x, std::size_t s) const { return deg_before(x, s + 1); }

    // Number of x's incident edges removed exactly in step s.
    int dropped_in(NodeId x, std::size_t s) const { return deg_before(x, s) - deg_after(x, s); }

    std::size_t removed_at(NodeId a, NodeId b) const {
        auto id = g_->find_edge(a, b);
        return id ? removed_at_[static_cast<std::size_t>(*id)] : 0;
    }
    bool alive_at(NodeId a, NodeId b, std::size_t s) const {
        auto id = g_->find_edge(a, b);
        return id && removed_at_[static_cast<std::size_t>(*id)] >= s;
    }
    std::size_t matched_at(NodeId x) const { return matched_at_[static_cast<std::size_t>(x)]; }

    std::vector<NodeId> alive_neighbors_at(NodeId x, std::size_t s) const {
        std::vector<NodeId> out;
        for (const Incidence& inc : g_->incident(x))
            if (removed_at_[static_cast<std::size_t>(inc.edge)] >= s) out.push_back(inc.neighbor);
        return out;
    }

private:
    const Graph* g_;
    const RunTrace* trace_;
    std::vector<std::size_t> removed_at_;
    std::vector<std::size_t> matched_at_;
    std::vector<std::vector<std::size_t>> drops_;
};

struct Transfer {
    NodeId from = kNoNode;
    NodeId to = kNoNode;
    std::size_t step = 0;
    bool cancelled = false;
};

struct Donation {
    enum class Kind { static_donation, dynamic_donation };
    NodeId from = kNoNode;
    NodeId to = kNoNode;
    Kind kind = Kind::static_donation;
    int coins = 0;
    std::size_t step = 0;
    int recipient = -1;  // component index of `to`
};

struct ComponentLedger {
    std::size_t creation_step = 0;
    NodeId u = kNoNode;  // selected in the creation step
    NodeId v = kNoNode;  // its partner
    int sel_degree = 0;
    bool deg1_endpoint = false;  // some path endpoint has degree exactly 1 right after creation
    int creation_debits = 0;     // k: non-cancelled transfers paid by u and v
    int transfer_credits = 0;
    int transfer_debits = 0;
    int donation_in = 0;
    int donation_out = 0;
    int capacity = 0;  // D_X = 2 m_X (delta - 2)

    int credits() const { return transfer_credits + donation_in; }
    int debits() const { return transfer_debits + donation_out; }
};

struct EdgeLedger {
    Edge e;
    int component = -1;
    int transfer_coins = 0;
    int donation_coins = 0;
    int coins() const { return transfer_coins + donation_coins; }
};

struct ChargingLedger {
    int delta = 3;
    Rational theta;
    std::vector<Transfer> transfers;  // by (step, from, to)
    std::vector<Donation> donations;  // by step
    std::vector<ComponentLedger> components;
    std::vector<EdgeLedger> m_edges;             // sorted by edge
    std::vector<int> credits_pre_cancel;         // per node
    std::vector<int> credits;                    // per node, after cancellation
    std::vector<int> debits;                     // per node: non-cancelled transfers + donated coins

    int total_credits() const {
        int s = 0;
        for (const auto& c : components) s += c.credits();
        return s;
    }
    int total_debits() const {
        int s = 0;
        for (const auto& c : components) s += c.debits();
        return s;
    }
};

inline Rational coin_value(int delta) { return Rational(1, 2 * (2 * delta - 3)); }
inline Rational target_ratio(int delta) { return Rational(delta - 1, 2 * delta - 3); }

// Checks that (trace, dec) describe one 1-2-MinGreedy (or MinGreedy) run.
inline void check_run_matches(const Graph& g, const RunTrace& trace, const Decomposition& dec) {
    replay_trace(g, trace);
    std::string why = check_min_degree_rule(g, trace, Algo::one_two_min_greedy);
    if (!why.empty()) throw InputError("not a 1-2-MinGreedy trace: " + why);
    if (trace.result != dec.m) throw InputError("trace matching differs from the decomposition's M");
}

inline ChargingLedger build_ledger(const Graph& g, const RunTrace& trace, const Decomposition& dec, int delta) {
    if (delta < 3) throw InputError("the charging scheme needs delta >= 3");
    if (g.delta() > delta) throw InputError("graph degree exceeds the given delta");
    check_run_matches(g, trace, dec);
    const RunHistory h(g, trace);
    const auto n = static_cast<std::size_t>(g.n());
    auto comp = [&](NodeId x) { return dec.component_of[static_cast<std::size_t>(x)]; };

    ChargingLedger L;
    L.delta = delta;
    L.theta = coin_value(delta);
    L.credits_pre_cancel.assign(n, 0);
    L.credits.assign(n, 0);
    L.debits.assign(n, 0);

    for (const TraceStep& s : trace.steps) {
        for (const Edge& e : s.removed) {
            if (!dec.is_f_edge(e)) continue;
            for (NodeId x : {s.selected, s.partner}) {
                if (!e.touches(x)) continue;
                NodeId w = e.other(x);
                if (dec.is_endpoint[static_cast<std::size_t>(w)] && h.deg_after(w, s.index) <= 1)
                    L.transfers.push_back({x, w, s.index, false});
            }
        }
    }
    std::sort(L.transfers.begin(), L.transfers.end(), [](const Transfer& a, const Transfer& b) {
        if (a.step != b.step) return a.step < b.step;
        if (a.from != b.from) return a.from < b.from;
        return a.to < b.to;
    });
    for (Transfer& t : L.transfers) {
        auto w = static_cast<std::size_t>(t.to);
        ++L.credits_pre_cancel[w];
        // w is down to its last edge, which is this F-edge, and is already paid twice.
        if (h.deg_before(t.to, t.step) == 1 && L.credits[w] == 2) {
            t.cancelled = true;
            continue;
        }
        ++L.credits[w];
        ++L.debits[static_cast<std::size_t>(t.from)];
    }

    L.components.resize(dec.components.size());
    for (std::size_t i = 0; i < dec.components.size(); ++i) {
        const Component& c = dec.components[i];
        ComponentLedger& cl = L.components[i];
        cl.creation_step = SIZE_MAX;
        for (const Edge& e : c.m_edges) cl.creation_step = std::min(cl.creation_step, h.matched_at(e.u));
        const TraceStep& st = h.step(cl.creation_step);
        cl.u = st.selected;
        cl.v = st.partner;
        cl.sel_degree = st.sel_degree;
        cl.capacity = 2 * static_cast<int>(c.m_x()) * (delta - 2);
        for (const Transfer& t : L.transfers) {
            if (t.step != cl.creation_step || (t.from != cl.u && t.from != cl.v)) continue;
            if (t.cancelled) continue;
            ++cl.creation_debits;
        }
        // Any path endpoint left with exactly one edge counts, not only debit
        // recipients: it is never matched, so the next step must select a
        // degree-1 node either way.
        for (const Edge& e : st.removed)
            for (NodeId w : {e.u, e.v})
                if (dec.is_endpoint[static_cast<std::size_t>(w)] && h.deg_after(w, st.index) == 1)
                    cl.deg1_endpoint = true;
    }

    if (delta >= 4) {
        for (std::size_t i = 0; i < dec.components.size(); ++i) {
            const ComponentLedger& cl = L.components[i];
            if (!dec.components[i].is_path() || !cl.deg1_endpoint || cl.creation_debits == 0) continue;
            const std::size_t next = cl.creation_step + 1;
            if (next > h.steps()) continue;
            const TraceStep& st = h.step(next);
            if (st.sel_degree != 1) continue;
            const NodeId up = st.selected;
            if (comp(up) == static_cast<int>(i)) continue;
            auto f_edge_at_creation = [&](NodeId x) {
                Edge e(up, x);
                return dec.is_f_edge(e) && h.removed_at(up, x) == cl.creation_step;
            };
            Donation d;
            d.from = up;
            d.step = next;
            d.recipient = static_cast<int>(i);
            if (cl.sel_degree == 2) {
                d.kind = Donation::Kind::static_donation;
                d.coins = delta - 3;
                d.to = f_edge_at_creation(cl.v) ? cl.v : (f_edge_at_creation(cl.u) ? cl.u : kNoNode);
            } else {
                d.kind = Donation::Kind::dynamic_donation;
                d.coins = cl.creation_debits;
                d.to = f_edge_at_creation(cl.u) ? cl.u : (f_edge_at_creation(cl.v) ? cl.v : kNoNode);
            }
            if (d.to == kNoNode || d.coins == 0) continue;
            L.donations.push_back(d);
        }
        std::sort(L.donations.begin(), L.donations.end(),
                  [](const Donation& a, const Donation& b) { return a.step < b.step; });
    }

    for (const Transfer& t : L.transfers) {
        if (t.cancelled) continue;
        ++L.components[static_cast<std::size_t>(comp(t.from))].transfer_debits;
        ++L.components[static_cast<std::size_t>(comp(t.to))].transfer_credits;
    }
    for (const Donation& d : L.donations) {
        L.debits[static_cast<std::size_t>(d.from)] += d.coins;
        L.components[static_cast<std::size_t>(comp(d.from))].donation_out += d.coins;
        L.components[static_cast<std::size_t>(d.recipient)].donation_in += d.coins;
    }
    for (std::size_t i = 0; i < dec.components.size(); ++i) {
        for (const Edge& e : dec.components[i].m_edges) {
            EdgeLedger el;
            el.e = e;
            el.component = static_cast<int>(i);
            for (const Transfer& t : L.transfers)
                if (!t.cancelled && e.touches(t.from)) ++el.transfer_coins;
            for (const Donation& d : L.donations)
                if (e.touches(d.from)) el.donation_coins += d.coins;
            L.m_edges.push_back(el);
        }
    }
    std::sort(L.m_edges.begin(), L.m_edges.end(), [](const EdgeLedger& a, const EdgeLedger& b) { return a.e < b.e; });
    return L;
}

struct Check {
    std::string name;
    std::string target;
    std::string lhs;
    std::string rel;
    std::string rhs;
    bool pass = true;
};

struct Report {
    std::vector<Check> checks;
    Rational ratio{1};

    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.pass; }));
    }
    void append(const Report& o) { checks.insert(checks.end(), o.checks.begin(), o.checks.end()); }

    void add(std::string name, std::string target, const Rational& lhs, const std::string& rel, const Rational& rhs) {
        bool ok = false;
        if (rel == "<=") ok = lhs <= rhs;
        else if (rel == ">=") ok = lhs >= rhs;
        else if (rel == "==") ok = lhs == rhs;
        else if (rel == "<") ok = lhs < rhs;
        else if (rel == ">") ok = lhs > rhs;
        else throw InternalError("unknown relation " + rel);
        checks.push_back({std::move(name), std::move(target), lhs.str(), rel, rhs.str(), ok});
    }
    void add_bool(std::string name, std::string target, bool holds) {
        checks.push_back({std::move(name), std::move(target), holds ? "1" : "0", "==", "1", holds});
    }
};

namespace detail {
inline std::string comp_tag(std::size_t i) { return "X" + std::to_string(i); }
inline std::string edge_tag(const Edge& e) { return "e" + std::to_string(e.u) + "-" + std::to_string(e.v); }
inline std::string node_tag(NodeId x) { return "w" + std::to_string(x); }
}  // namespace detail

// The four balance bounds per component and M-edge, the implied local ratio
// per component, coin conservation, and the global ratio.
inline Report verify_bounds(const ChargingLedger& L, const Decomposition& dec) {
    Report r;
    const int D = L.delta;
    const Rational beta = target_ratio(D);
    for (const EdgeLedger& el : L.m_edges)
        r.add("edge_coins", detail::edge_tag(el.e), el.coins(), "<=", 2 * (D - 2));
    Rational sum_num(0);
    std::int64_t sum_den = 0;
    for (std::size_t i = 0; i < dec.components.size(); ++i) {
        const Component& c = dec.components[i];
        const ComponentLedger& cl = L.components[i];
        const std::string tag = detail::comp_tag(i);
        if (c.is_path()) {
            r.add("endpoint_credits", tag, cl.transfer_credits, ">=", 2);
            r.add("path_balance", tag, cl.credits() - cl.debits(), ">=", 2 - cl.capacity + 2 * (D - 2));
        } else {
            r.add("singleton_balance", tag, -cl.debits(), ">=", -2 * (D - 1) + 2);
        }
        Rational local = (Rational(static_cast<std::int64_t>(c.m_x())) + L.theta * Rational(cl.credits() - cl.debits())) /
                         Rational(static_cast<std::int64_t>(c.m_star_x()));
        r.add("local_ratio", tag, local, ">=", beta);
        sum_num += Rational(static_cast<std::int64_t>(c.m_x())) + L.theta * Rational(cl.credits() - cl.debits());
        sum_den += static_cast<std::int64_t>(c.m_star_x());
    }
    r.add("conservation", "G", L.total_credits(), "==", L.total_debits());
    r.ratio = dec.global_ratio();
    if (sum_den > 0) r.add("ratio_identity", "G", r.ratio, "==", sum_num / Rational(sum_den));
    r.add("global_ratio", "G", r.ratio, ">=", beta);
    return r;
}

// Instantiates the auxiliary statements of the analysis on a concrete run.
// Each statement is only asserted where its hypotheses hold, and hypotheses
// are recomputed from the trace rather than taken from the ledger.
inline Report verify_claim_predicates(const Graph& g, const RunTrace& trace, const Decomposition& dec,
                                      const ChargingLedger& L) {
    Report r;
    r.ratio = dec.global_ratio();
    const int D = L.delta;
    const RunHistory h(g, trace);
    auto comp = [&](NodeId x) { return dec.component_of[static_cast<std::size_t>(x)]; };
    auto is_f = [&](NodeId a, NodeId b) { return g.has_edge(a, b) && dec.is_f_edge(Edge(a, b)); };

    // Per-node non-cancelled transfer debits, recounted.
    std::vector<int> tdebit(static_cast<std::size_t>(g.n()), 0);
    for (const Transfer& t : L.transfers)
        if (!t.cancelled) ++tdebit[static_cast<std::size_t>(t.from)];
    // Every transfer must be recheckable from the trace alone.
    for (const Transfer& t : L.transfers) {
        bool ok = is_f(t.from, t.to) && h.matched_at(t.from) == t.step && h.removed_at(t.from, t.to) == t.step &&
                  dec.is_endpoint[static_cast<std::size_t>(t.to)] && h.deg_after(t.to, t.step) <= 1;
        r.add_bool("transfer_wellformed", "s" + std::to_string(t.step) + ":" + std::to_string(t.from) + ">" +
                                              std::to_string(t.to), ok);
        if (t.cancelled) {
            bool why = h.deg_before(t.to, t.step) == 1;
            r.add_bool("cancel_wellformed", detail::node_tag(t.to), why);
        }
    }

    for (std::size_t i = 0; i < dec.components.size(); ++i) {
        const Component& c = dec.components[i];
        const std::string tag = detail::comp_tag(i);
        // Recompute the creation step independently.
        std::size_t s = SIZE_MAX;
        for (const Edge& e : c.m_edges) s = std::min(s, h.matched_at(e.u));
        const TraceStep& st = h.step(s);
        const NodeId u = st.selected, v = st.partner;
        const int du = st.sel_degree;

        int comp_debits = 0;
        for (NodeId x : c.nodes) comp_debits += L.debits[static_cast<std::size_t>(x)];

        if (!c.is_path()) {
            int td = tdebit[static_cast<std::size_t>(c.nodes[0])] + tdebit[static_cast<std::size_t>(c.nodes[1])];
            r.add("singleton_transfer_debits", tag, td, "<=", 2 * (D - 1));
            if (D == 3) r.add("missing_debits", tag, comp_debits, "<=", 2 * (D - 1) - 2);
            continue;
        }

        for (NodeId w : c.endpoints) {
            r.add("endpoint_degree", detail::node_tag(w), g.degree(w), ">=", 2);
            auto wi = static_cast<std::size_t>(w);
            r.add("credit_at_least_one", detail::node_tag(w), L.credits[wi], ">=", 1);
            r.add("credits_pre_cancel", detail::node_tag(w), L.credits_pre_cancel[wi], "<=", 3);
            r.add("credits_post_cancel", detail::node_tag(w), L.credits[wi], "<=", 2);
            bool any_cancel = std::any_of(L.transfers.begin(), L.transfers.end(),
                                          [&](const Transfer& t) { return t.to == w && t.cancelled; });
            if (any_cancel) r.add("credits_after_cancel", detail::node_tag(w), L.credits[wi], "==", 2);
            // Three credits exactly when the degree goes 3 -> 1 over two F-edges
            // in one step and later 1 -> 0 over an F-edge.
            bool pattern = false;
            for (std::size_t k = 1; k <= h.steps() && !pattern; ++k) {
                if (h.deg_before(w, k) != 3 || h.deg_after(w, k) != 1) continue;
                int f_removed = 0;
                for (const Edge& e : h.step(k).removed)
                    if (e.touches(w) && dec.is_f_edge(e)) ++f_removed;
                if (f_removed != 2) continue;
                for (std::size_t k2 = k + 1; k2 <= h.steps(); ++k2) {
                    if (h.deg_before(w, k2) == 1 && h.deg_after(w, k2) == 0) {
                        for (const Edge& e : h.step(k2).removed)
                            if (e.touches(w) && dec.is_f_edge(e)) pattern = true;
                        break;
                    }
                }
            }
            r.add_bool("three_credit_pattern", detail::node_tag(w), (L.credits_pre_cancel[wi] == 3) == pattern);
        }
        int endpoint_credits = 0;
        for (NodeId w : c.endpoints) endpoint_credits += L.credits[static_cast<std::size_t>(w)];
        r.add("path_credits", tag, endpoint_credits, ">=", 2);
        r.add("creation_degree", tag, du, ">=", 2);
        for (const Edge& e : c.m_edges)
            r.add("path_edge_transfer_debits", detail::edge_tag(e),
                  tdebit[static_cast<std::size_t>(e.u)] + tdebit[static_cast<std::size_t>(e.v)], "<=", 2 * (D - 2));

        // Debits paid by u and v in the creation step.
        std::vector<const Transfer*> uv_debits;
        for (const Transfer& t : L.transfers)
            if (!t.cancelled && t.step == s && (t.from == u || t.from == v)) uv_debits.push_back(&t);
        const int duv = static_cast<int>(uv_debits.size());
        bool deg1 = false;
        for (NodeId x : {u, v})
            for (NodeId y : h.alive_neighbors_at(x, s))
                if (dec.is_endpoint[static_cast<std::size_t>(y)] && h.deg_after(y, s) == 1) deg1 = true;
        r.add_bool("deg1_endpoint_agrees", tag, deg1 == L.components[i].deg1_endpoint);

        const int mx = static_cast<int>(c.m_x());
        if (D == 3) {
            if (du == 1 || du == 3) r.add("missing_debits", tag, comp_debits, "<=", 2 * mx * (D - 2) - 2);
            if (comp_debits == 2 * mx - 1) r.add("extra_credit", tag, L.components[i].credits(), ">=", 3);
        }

        if (duv > 0 && du >= 3) r.add_bool("deg1_endpoint_if_degree_3", tag, deg1);
        if (duv > 0 && !deg1) {
            r.add("no_deg1_selection_degree", tag, du, "==", 2);
            const int du_debits = static_cast<int>(std::count_if(uv_debits.begin(), uv_debits.end(),
                                                                 [&](const Transfer* t) { return t->from == u; }));
            for (const Transfer* t : uv_debits) {
                const NodeId w = t->to;
                const std::string wt = tag + ":" + detail::node_tag(w);
                r.add("no_deg1_w_after", wt, h.deg_after(w, s), "==", 0);
                r.add("no_deg1_w_before", wt, h.deg_before(w, s), "==", 2);
                r.add("no_deg1_u_pays_nothing", wt, du_debits, "==", 0);
                r.add_bool("no_deg1_debit_from_v", wt, t->from == v);
                r.add_bool("no_deg1_uw_opt", wt, g.has_edge(u, w) && dec.m_star.contains(Edge(u, w)));
                bool others_high = true;
                for (NodeId y : h.alive_neighbors_at(v, s))
                    if (y != w && dec.is_endpoint[static_cast<std::size_t>(y)] && h.deg_before(y, s) < 3)
                        others_high = false;
                r.add_bool("no_deg1_other_endpoints_high", wt, others_high);
                r.add("no_deg1_v_single_debit", wt, duv - du_debits, "==", 1);
            }
            if (D >= 4) {
                bool extra = L.components[i].credits() >= 3;
                for (const Edge& e : c.m_edges) {
                    if (e == Edge(u, v)) continue;
                    auto it = std::find_if(L.m_edges.begin(), L.m_edges.end(),
                                           [&](const EdgeLedger& el) { return el.e == e; });
                    if (it != L.m_edges.end() && it->coins() <= 2 * (D - 2) - 1) extra = true;
                }
                r.add_bool("no_deg1_compensated", tag, extra);
            }
        }

        if (deg1) {
            const std::size_t next = s + 1;
            bool has_next = next <= h.steps();
            r.add_bool("next_step_exists", tag, has_next);
            if (!has_next) continue;
            const TraceStep& nst = h.step(next);
            const NodeId up = nst.selected, vp = nst.partner;
            r.add("next_selected_degree", tag, nst.sel_degree, "==", 1);
            const bool in_x = comp(up) == static_cast<int>(i);
            bool opt_nb = in_x && (dec.m_star.contains(Edge(up, u)) || dec.m_star.contains(Edge(up, v)));
            bool f_nb = !in_x && ((is_f(up, u) && h.removed_at(up, u) == s) || (is_f(up, v) && h.removed_at(up, v) == s));
            r.add_bool("next_selected_neighbor", tag, opt_nb || f_nb);
            if (D < 4) continue;
            const int dvp = tdebit[static_cast<std::size_t>(vp)];
            const Donation* don = nullptr;
            for (const Donation& d : L.donations)
                if (d.recipient == static_cast<int>(i)) don = &d;
            if (duv == 0) {
                r.add("kl_sum", tag, dvp, "<=", 2 * (D - 2));
                r.add_bool("no_donation_without_debits", tag, don == nullptr);
            } else if (du == 2) {
                if (in_x) {
                    r.add("kl_inside_k", tag, duv, "<=", D - 2);
                    r.add("kl_inside_l", tag, dvp, "<=", D - 2);
                    r.add("kl_sum", tag, duv + dvp, "<=", 2 * (D - 2));
                } else {
                    r.add("kl_outside_k", tag, duv, "<=", D - 3);
                    r.add("kl_outside_l", tag, dvp, "<=", D - 1);
                    r.add("kl_sum", tag, (D - 3) + dvp, "<=", 2 * (D - 2));
                    r.add_bool("static_donation_to_v", tag,
                               don && don->kind == Donation::Kind::static_donation && don->to == v &&
                                   don->coins == D - 3 && don->from == up);
                }
            } else if (du >= 3) {
                // Endpoint sets around u and v at the creation step.
                std::set<NodeId> W;
                for (NodeId x : {u, v})
                    for (NodeId y : h.alive_neighbors_at(x, s))
                        if (dec.is_endpoint[static_cast<std::size_t>(y)] && h.deg_before(y, s) >= 3) W.insert(y);
                int w11 = 0, w12 = 0, w2 = 0, ew = 0;
                for (NodeId y : W) {
                    int f = (is_f(y, u) ? 1 : 0) + (is_f(y, v) ? 1 : 0);
                    ew += (g.has_edge(y, u) ? 1 : 0) + (g.has_edge(y, v) ? 1 : 0);
                    int after = h.deg_after(y, s);
                    if (after == 1) (f == 2 ? w12 : w11) += (f >= 1 ? 1 : 0);
                    else if (after == 2) ++w2;
                }
                r.add("wsets_k", tag, duv, "==", 2 * w12 + w11);
                r.add("wsets_l", tag, dvp, "<=", w11 + w2);
                r.add("wsets_edges", tag, 2 * w12 + 2 * w11 + w2, "<=", ew);
                r.add("wsets_bound", tag, ew, "<=", 2 * (D - 2));
                r.add("kl_sum", tag, duv + dvp, "<=", 2 * (D - 2));
                if (!in_x)
                    r.add_bool("dynamic_donation_k", tag,
                               don && don->kind == Donation::Kind::dynamic_donation && don->coins == duv &&
                                   don->from == up);
            }
        }
    }

    if (D == 3) {
        r.add("no_donations", "G", static_cast<std::int64_t>(L.donations.size()), "==", 0);
    } else {
        std::set<std::size_t> creation, donation_steps;
        for (std::size_t i = 0; i < dec.components.size(); ++i) {
            if (!dec.components[i].is_path()) continue;
            creation.insert(L.components[i].creation_step);
            if (L.components[i].deg1_endpoint) donation_steps.insert(L.components[i].creation_step + 1);
        }
        bool disjoint = true;
        for (std::size_t d : donation_steps)
            if (creation.count(d)) disjoint = false;
        r.add_bool("creation_donation_disjoint", "G", disjoint);
        std::map<std::size_t, int> per_step;
        for (const Donation& d : L.donations) {
            ++per_step[d.step];
            const ComponentLedger& cl = L.components[static_cast<std::size_t>(d.recipient)];
            r.add_bool("donation_target_created_before", "s" + std::to_string(d.step),
                       h.matched_at(d.to) + 1 == d.step && cl.creation_step + 1 == d.step);
        }
        for (auto [step, count] : per_step) r.add("donations_per_step", "s" + std::to_string(step), count, "==", 1);
    }
    return r;
}

// Runs the whole pipeline on one traced run: canonical optimum, decomposition,
// ledger, bounds, and predicates.
struct Verification {
    Decomposition dec;
    ChargingLedger ledger;
    Report report;
};

inline Verification verify_run(const Graph& g, const RunTrace& trace, int delta) {
    Verification out;
    out.dec = decompose_run(g, trace.result);
    out.ledger = build_ledger(g, trace, out.dec, delta);
    out.report = verify_bounds(out.ledger, out.dec);
    out.report.append(verify_claim_predicates(g, trace, out.dec, out.ledger));
    return out;
}

inline std::string format_report(const Report& r) {
    std::ostringstream os;
    for (const Check& c : r.checks)
        os << "chk " << c.name << ' ' << c.target << ' ' << c.lhs << ' ' << c.rel << ' ' << c.rhs << ' '
           << (c.pass ? "PASS" : "FAIL") << '\n';
    os << "ratio " << r.ratio.str() << '\n';
    os << "verdict " << (r.all_pass() ? "PASS" : "FAIL") << ' ' << r.failures() << '\n';
    return os.str();
}

inline std::string format_report_csv(const Report& r) {
    std::ostringstream os;
    os << "name,target,lhs,rel,rhs,result\n";
    for (const Check& c : r.checks)
        os << c.name << ',' << c.target << ',' << c.lhs << ',' << c.rel << ',' << c.rhs << ','
           << (c.pass ? "PASS" : "FAIL") << '\n';
    return os.str();
}

inline std::string format_ledger(const ChargingLedger& L) {
    std::ostringstream os;
    os << "theta " << L.theta.str() << '\n';
    for (const Transfer& t : L.transfers)
        os << "transfer " << t.step << ' ' << t.from << ' ' << t.to << (t.cancelled ? " cancelled" : "") << '\n';
    for (const Donation& d : L.donations)
        os << "donation " << d.step << ' ' << d.from << ' ' << d.to << ' '
           << (d.kind == Donation::Kind::static_donation ? "static" : "dynamic") << ' ' << d.coins << '\n';
    for (std::size_t i = 0; i < L.components.size(); ++i) {
        const auto& c = L.components[i];
        os << "balance X" << i << " created " << c.creation_step << " credits " << c.credits() << " debits "
           << c.debits() << '\n';
    }
    return os.str();
}

}  // namespace matchforge
