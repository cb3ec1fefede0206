#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/graph.hpp"

namespace matchforge {

// Deletion-only view of a Graph. Nodes with nonzero degree live in buckets
// indexed by their current degree; since degrees only fall, a cursor that is
// lowered on every decrement and advanced lazily on query gives amortized O(1)
// access to the minimum nonzero degree.
class ResidualView {
public:
    explicit ResidualView(const Graph& g)
        : g_(&g),
          alive_(g.m(), 1),
          deg_(static_cast<std::size_t>(g.n()), 0),
          pos_(static_cast<std::size_t>(g.n()), 0),
          buckets_(static_cast<std::size_t>(g.delta()) + 1),
          alive_count_(g.m()) {
        for (NodeId v = 0; v < g.n(); ++v) {
            int d = g.degree(v);
            deg_[static_cast<std::size_t>(v)] = d;
            if (d > 0) bucket_insert(v, d);
        }
        cursor_ = 1;
    }

    const Graph& base() const { return *g_; }
    int degree(NodeId v) const { return deg_[static_cast<std::size_t>(v)]; }
    const std::vector<int>& degrees() const { return deg_; }
    bool alive(EdgeId e) const { return alive_[static_cast<std::size_t>(e)] != 0; }
    bool alive(NodeId a, NodeId b) const {
        auto e = g_->find_edge(a, b);
        return e && alive(*e);
    }
    std::size_t alive_edge_count() const { return alive_count_; }
    bool empty() const { return alive_count_ == 0; }

    int min_degree() const {
        if (alive_count_ == 0) return 0;
        while (buckets_[static_cast<std::size_t>(cursor_)].empty()) ++cursor_;
        return cursor_;
    }

    std::vector<NodeId> min_degree_nodes() const {
        if (alive_count_ == 0) throw InternalError("min_degree_nodes on an empty residual graph");
        std::vector<NodeId> out = buckets_[static_cast<std::size_t>(min_degree())];
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<NodeId> nodes_of_degree(int d) const {
        if (d <= 0 || d >= static_cast<int>(buckets_.size())) return {};
        std::vector<NodeId> out = buckets_[static_cast<std::size_t>(d)];
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<NodeId> alive_neighbors(NodeId v) const {
        std::vector<NodeId> out;
        for (const Incidence& inc : g_->incident(v))
            if (alive(inc.edge)) out.push_back(inc.neighbor);
        return out;
    }

    std::vector<EdgeId> alive_edges() const {
        std::vector<EdgeId> out;
        out.reserve(alive_count_);
        for (EdgeId e = 0; e < static_cast<EdgeId>(alive_.size()); ++e)
            if (alive_[static_cast<std::size_t>(e)]) out.push_back(e);
        return out;
    }

    std::vector<NodeId> non_isolated_nodes() const {
        std::vector<NodeId> out;
        for (NodeId v = 0; v < g_->n(); ++v)
            if (deg_[static_cast<std::size_t>(v)] > 0) out.push_back(v);
        return out;
    }

    // Deletes every alive edge touching u or v; returns them in ascending order.
    std::vector<Edge> remove_pair(NodeId u, NodeId v) {
        auto id = g_->find_edge(u, v);
        if (!id || !alive(*id))
            throw InputError("edge {" + std::to_string(u) + "," + std::to_string(v) + "} is not alive");
        std::vector<EdgeId> doomed;
        for (NodeId x : {u, v})
            for (const Incidence& inc : g_->incident(x))
                if (alive(inc.edge)) doomed.push_back(inc.edge);
        std::sort(doomed.begin(), doomed.end());
        doomed.erase(std::unique(doomed.begin(), doomed.end()), doomed.end());
        std::vector<Edge> removed;
        removed.reserve(doomed.size());
        for (EdgeId e : doomed) {
            kill(e);
            removed.push_back(g_->edge(e));
        }
        return removed;
    }

private:
    void kill(EdgeId e) {
        alive_[static_cast<std::size_t>(e)] = 0;
        --alive_count_;
        const Edge& ed = g_->edge(e);
        decrement(ed.u);
        decrement(ed.v);
    }

    void decrement(NodeId x) {
        int d = deg_[static_cast<std::size_t>(x)];
        bucket_erase(x, d);
        --d;
        deg_[static_cast<std::size_t>(x)] = d;
        if (d > 0) {
            bucket_insert(x, d);
            if (d < cursor_) cursor_ = d;
        }
    }

    void bucket_insert(NodeId x, int d) {
        auto& b = buckets_[static_cast<std::size_t>(d)];
        pos_[static_cast<std::size_t>(x)] = b.size();
        b.push_back(x);
    }

    void bucket_erase(NodeId x, int d) {
        auto& b = buckets_[static_cast<std::size_t>(d)];
        std::size_t p = pos_[static_cast<std::size_t>(x)];
        NodeId last = b.back();
        b[p] = last;
        pos_[static_cast<std::size_t>(last)] = p;
        b.pop_back();
    }

    const Graph* g_;
    std::vector<char> alive_;
    std::vector<int> deg_;
    std::vector<std::size_t> pos_;
    std::vector<std::vector<NodeId>> buckets_;
    std::size_t alive_count_;
    mutable int cursor_ = 1;
};

}  // namespace matchforge
