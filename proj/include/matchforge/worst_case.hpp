#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/graph.hpp"
#include "matchforge/matchers.hpp"
#include "matchforge/policy.hpp"
#include "matchforge/residual.hpp"

namespace matchforge {

struct WorstCaseResult {
    std::size_t size = 0;
    bool complete = true;  // false: budget ran out, `size` is only an upper bound
    std::size_t states = 0;
    Policy witness_policy;
    RunTrace witness;
};

namespace detail {

struct BitKey {
    std::vector<std::uint64_t> words;
    friend bool operator==(const BitKey&, const BitKey&) = default;
};

struct BitKeyHash {
    std::size_t operator()(const BitKey& k) const {
        std::uint64_t h = 0x84222325cbf29ce4ULL;
        for (std::uint64_t w : k.words) h = splitmix64(h ^ w);
        return static_cast<std::size_t>(h);
    }
};

// One way to finish a step, as positions in the candidate lists.
struct Option {
    std::size_t first = 0;
    std::size_t first_count = 1;
    std::size_t second = 0;
    std::size_t second_count = 1;
    NodeId u = kNoNode;
    NodeId v = kNoNode;
};

inline std::vector<Option> enumerate_options(const ResidualView& view, Algo algo, const std::vector<NodeId>* perm) {
    std::vector<Option> out;
    StepChoices c = step_choices(view, algo, perm);
    switch (c.kind) {
        case StepChoices::Kind::node_then_neighbor:
            for (std::size_t i = 0; i < c.nodes.size(); ++i) {
                auto nb = view.alive_neighbors(c.nodes[i]);
                for (std::size_t j = 0; j < nb.size(); ++j)
                    out.push_back({i, c.nodes.size(), j, nb.size(), c.nodes[i], nb[j]});
            }
            break;
        case StepChoices::Kind::edge:
            for (std::size_t i = 0; i < c.edges.size(); ++i) {
                const Edge& e = view.base().edge(c.edges[i]);
                out.push_back({i, c.edges.size(), 0, 1, e.u, e.v});
            }
            break;
        case StepChoices::Kind::fixed:
            out.push_back({0, 1, 0, 1, c.fixed_selected, c.fixed_partner});
            break;
    }
    return out;
}

class WorstCaseSearch {
public:
    WorstCaseSearch(const Graph& g, Algo algo, std::size_t budget, const std::vector<NodeId>* perm)
        : g_(g), algo_(algo), budget_(budget), perm_(perm) {}

    struct Aborted {};

    std::size_t solve(const ResidualView& view, std::size_t depth) {
        BitKey key = key_of(view);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        if (view.empty()) {
            note_leaf(depth);
            memo_.emplace(std::move(key), 0);
            return 0;
        }
        if (++states_ > budget_) throw Aborted{};
        std::size_t best = std::numeric_limits<std::size_t>::max();
        for (const Option& o : enumerate_options(view, algo_, perm_)) {
            ResidualView child = view;
            child.remove_pair(o.u, o.v);
            path_.push_back(o);
            std::size_t r = 1 + solve(child, depth + 1);
            path_.pop_back();
            best = std::min(best, r);
        }
        memo_.emplace(std::move(key), best);
        return best;
    }

    // Walks the memo table from the root, always taking the first option that
    // achieves the optimum, and records the choice points as a script.
    std::vector<ScriptEntry> witness_script(const ResidualView& root) {
        std::vector<ScriptEntry> script;
        ResidualView view = root;
        std::size_t step = 0;
        while (!view.empty()) {
            ++step;
            const std::size_t target = memo_.at(key_of(view));
            bool moved = false;
            for (const Option& o : enumerate_options(view, algo_, perm_)) {
                ResidualView child = view;
                child.remove_pair(o.u, o.v);
                auto it = memo_.find(key_of(child));
                if (it == memo_.end() || 1 + it->second != target) continue;
                push_option(script, step, o);
                view = std::move(child);
                moved = true;
                break;
            }
            require(moved, "worst-case witness walk lost the optimum");
        }
        return script;
    }

    std::vector<ScriptEntry> best_leaf_script() const {
        std::vector<ScriptEntry> script;
        for (std::size_t i = 0; i < best_leaf_path_.size(); ++i) push_option(script, i + 1, best_leaf_path_[i]);
        return script;
    }

    std::size_t best_leaf() const { return best_leaf_; }
    bool has_leaf() const { return best_leaf_ != std::numeric_limits<std::size_t>::max(); }
    std::size_t states() const { return states_; }

private:
    static void push_option(std::vector<ScriptEntry>& script, std::size_t step, const Option& o) {
        if (o.first_count > 1) script.push_back({step, o.first});
        if (o.second_count > 1) script.push_back({step, o.second});
    }

    BitKey key_of(const ResidualView& view) const {
        BitKey k;
        k.words.assign((g_.m() + 63) / 64, 0);
        for (EdgeId e = 0; e < static_cast<EdgeId>(g_.m()); ++e)
            if (view.alive(e)) k.words[static_cast<std::size_t>(e) / 64] |= 1ULL << (e % 64);
        return k;
    }

    void note_leaf(std::size_t size) {
        if (size < best_leaf_) {
            best_leaf_ = size;
            best_leaf_path_ = path_;
        }
    }

    const Graph& g_;
    Algo algo_;
    std::size_t budget_;
    const std::vector<NodeId>* perm_;
    std::unordered_map<BitKey, std::size_t, BitKeyHash> memo_;
    std::vector<Option> path_;
    std::vector<Option> best_leaf_path_;
    std::size_t best_leaf_ = std::numeric_limits<std::size_t>::max();
    std::size_t states_ = 0;
};

}  // namespace detail

inline constexpr std::size_t kDefaultSearchBudget = 2'000'000;

// Minimum matching size over every nondeterministic choice sequence of
// `algo`, with a scripted witness run that attains it. States are keyed by the
// alive edge set and memoized, so equal residual graphs are solved once.
inline WorstCaseResult worst_case_size(const Graph& g, Algo algo, std::size_t budget = kDefaultSearchBudget,
                                       const std::vector<NodeId>* perm = nullptr) {
    if (algo == Algo::shuffle) {
        if (!perm) throw InputError("shuffle needs a permutation");
        check_permutation(*perm, g.n());
    }
    detail::WorstCaseSearch search(g, algo, budget, perm);
    ResidualView root(g);
    WorstCaseResult out;
    try {
        out.size = search.solve(root, 0);
        out.witness_policy = Policy::scripted(search.witness_script(root));
    } catch (const detail::WorstCaseSearch::Aborted&) {
        out.complete = false;
        if (search.has_leaf()) {
            out.size = search.best_leaf();
            out.witness_policy = Policy::scripted(search.best_leaf_script());
        } else {
            out.size = std::numeric_limits<std::size_t>::max();
            out.witness_policy = Policy::first();
        }
    }
    out.states = search.states();
    out.witness = run_algorithm(g, algo, out.witness_policy, perm);
    if (!out.complete) out.size = std::min(out.size, out.witness.result.size());
    else require(out.witness.result.size() == out.size, "worst-case witness does not attain the optimum");
    return out;
}

}  // namespace matchforge
