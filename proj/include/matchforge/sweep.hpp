#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "matchforge/error.hpp"
#include "matchforge/game.hpp"
#include "matchforge/generators.hpp"
#include "matchforge/graph.hpp"
#include "matchforge/hard_instance.hpp"
#include "matchforge/matchers.hpp"
#include "matchforge/optimum.hpp"
#include "matchforge/rational.hpp"
#include "matchforge/rng.hpp"
#include "matchforge/worst_case.hpp"

namespace matchforge {

enum class SweepSource { random, regular, hard, bprime };
enum class SweepPolicy { first, random, worst };

inline std::string source_name(SweepSource s) {
    switch (s) {
        case SweepSource::random: return "random";
        case SweepSource::regular: return "regular";
        case SweepSource::hard: return "hard";
        case SweepSource::bprime: return "bprime";
    }
    return "?";
}

inline SweepSource parse_source(const std::string& s) {
    if (s == "random") return SweepSource::random;
    if (s == "regular") return SweepSource::regular;
    if (s == "hard" || s == "B") return SweepSource::hard;
    if (s == "bprime" || s == "Bprime") return SweepSource::bprime;
    throw InputError("unknown instance source '" + s + "'");
}

inline SweepPolicy parse_sweep_policy(const std::string& s) {
    if (s == "first") return SweepPolicy::first;
    if (s == "random") return SweepPolicy::random;
    if (s == "worst") return SweepPolicy::worst;
    throw InputError("unknown sweep policy '" + s + "' (first|random|worst)");
}

struct SweepSpec {
    int delta_lo = 3;
    int delta_hi = 3;
    SweepSource source = SweepSource::random;
    std::size_t count = 10;
    std::uint64_t seed = 0;
    std::vector<std::string> algos{"mingreedy"};
    SweepPolicy policy = SweepPolicy::first;
    NodeId n = 10;       // random / regular instance size
    double p = 0.5;      // random edge retention
    int t = 20;          // bprime: node budget is t * delta
    std::size_t budget = kDefaultSearchBudget;
    unsigned jobs = 1;
};

struct SweepRow {
    int delta = 0;
    std::string source;
    std::uint64_t seed = 0;
    std::string algo;
    std::size_t m_size = 0;
    std::size_t opt_size = 0;
    Rational ratio{1};
};

inline const char* kSweepHeader = "delta,source,seed,algo,m_size,opt_size,ratio,ratio_frac\n";

inline std::string ratio_decimal(const Rational& r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r.to_double());
    return buf;
}

inline Rational matching_ratio(std::size_t m, std::size_t opt) {
    if (opt == 0) return Rational(1);
    return Rational(static_cast<std::int64_t>(m), static_cast<std::int64_t>(opt));
}

namespace detail {

struct SweepJob {
    int delta;
    std::size_t instance;
    std::uint64_t seed;  // per-instance, derived from the spec seed
};

inline std::vector<NodeId> seeded_permutation(NodeId n, std::uint64_t seed) {
    auto perm = identity_permutation(n);
    Rng rng(seed);
    rng.shuffle(perm);
    return perm;
}

inline std::size_t sweep_run_graph(const Graph& g, const std::string& algo_id, const SweepSpec& spec,
                                   std::uint64_t seed, std::size_t algo_index) {
    Algo algo = parse_algo(algo_id);
    std::vector<NodeId> perm;
    if (algo == Algo::shuffle) perm = seeded_permutation(g.n(), derive_seed(seed, 1000 + algo_index));
    const std::vector<NodeId>* pp = algo == Algo::shuffle ? &perm : nullptr;
    switch (spec.policy) {
        case SweepPolicy::first: return run_algorithm(g, algo, Policy::first(), pp).result.size();
        case SweepPolicy::random:
            return run_algorithm(g, algo, Policy::random(derive_seed(seed, algo_index)), pp).result.size();
        case SweepPolicy::worst: {
            auto r = worst_case_size(g, algo, spec.budget, pp);
            if (!r.complete)
                throw BudgetExceeded("worst-case search exceeded the state budget (best seen " +
                                     std::to_string(r.size) + ")");
            return r.size;
        }
    }
    return 0;
}

inline std::vector<SweepRow> sweep_job(const SweepSpec& spec, const SweepJob& job) {
    std::vector<SweepRow> rows;
    const int d = job.delta;
    auto add = [&](const std::string& src, const std::string& algo, std::size_t m, std::size_t opt) {
        rows.push_back({d, src, job.seed, algo, m, opt, matching_ratio(m, opt)});
    };
    if (spec.source == SweepSource::random || spec.source == SweepSource::regular) {
        Graph g = spec.source == SweepSource::random ? gen_random_bounded(spec.n, d, spec.p, job.seed)
                                                     : gen_regular(spec.n, d, job.seed);
        const std::size_t opt = maximum_matching(g).size();
        for (std::size_t a = 0; a < spec.algos.size(); ++a)
            add(source_name(spec.source), spec.algos[a], sweep_run_graph(g, spec.algos[a], spec, job.seed, a), opt);
        return rows;
    }
    for (const std::string& algo_id : spec.algos) {
        auto enc = encode_priority(algo_id, d);
        auto server = spec.source == SweepSource::hard ? HardInstanceAdversary::single_center(d)
                                                       : HardInstanceAdversary::multi_center(d, spec.t);
        GameResult r = play_game(*enc, server, d);
        std::string src = spec.source == SweepSource::hard ? "hard" : "bprime-t" + std::to_string(spec.t);
        add(src, algo_id, r.matching.size(), maximum_matching(r.graph).size());
    }
    return rows;
}

}  // namespace detail

inline void validate_sweep(const SweepSpec& s) {
    if (s.delta_lo < 1 || s.delta_hi < s.delta_lo) throw InputError("bad delta range");
    if (s.algos.empty()) throw InputError("sweep needs at least one algorithm");
    for (const auto& a : s.algos) {
        if (s.source == SweepSource::random || s.source == SweepSource::regular) {
            parse_algo(a);
        } else {
            encode_priority(a, 3);
            if (s.delta_lo < 3) throw InputError("hard-instance sources need delta >= 3");
        }
    }
    if (s.source == SweepSource::regular)
        for (int d = s.delta_lo; d <= s.delta_hi; ++d)
            if ((static_cast<long long>(s.n) * d) % 2 != 0 || d >= s.n)
                throw InputError("no simple " + std::to_string(d) + "-regular graph on " + std::to_string(s.n) +
                                 " nodes");
    if (s.source == SweepSource::bprime && s.t < 7) throw InputError("bprime sweeps need t >= 7");
    if (s.p < 0 || s.p > 1) throw InputError("p must lie in [0, 1]");
}

// Runs the grid. Instance i at degree d uses seed derive_seed(derive_seed(seed, d), i);
// randomized policies and permutations derive further from that seed and the
// algorithm's position. Rows come out in (delta, instance, algo) order no
// matter how many workers ran.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    validate_sweep(spec);
    std::vector<detail::SweepJob> jobs;
    for (int d = spec.delta_lo; d <= spec.delta_hi; ++d)
        for (std::size_t i = 0; i < spec.count; ++i)
            jobs.push_back({d, i, derive_seed(derive_seed(spec.seed, static_cast<std::uint64_t>(d)), i)});

    std::vector<std::vector<SweepRow>> out(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                out[i] = detail::sweep_job(spec, jobs[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next.store(jobs.size());
                return;
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(jobs.size())));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) {
        // Report the first failing job in index order for stable messages.
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            if (!out[i].empty()) continue;
            try {
                out[i] = detail::sweep_job(spec, jobs[i]);
            } catch (const BudgetExceeded& e) {
                throw BudgetExceeded("sweep run delta=" + std::to_string(jobs[i].delta) + " instance=" +
                                     std::to_string(jobs[i].instance) + ": " + e.what());
            } catch (const InputError& e) {
                throw InputError("sweep run delta=" + std::to_string(jobs[i].delta) + " instance=" +
                                 std::to_string(jobs[i].instance) + ": " + e.what());
            }
        }
        std::rethrow_exception(failure);
    }
    std::vector<SweepRow> rows;
    for (auto& v : out) rows.insert(rows.end(), v.begin(), v.end());
    return rows;
}

// One line per run, then per (delta, algo) a row with source "min" holding
// the smallest ratio.
inline std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << kSweepHeader;
    std::map<std::pair<int, std::string>, Rational> mins;
    std::vector<std::pair<int, std::string>> order;
    for (const SweepRow& r : rows) {
        os << r.delta << ',' << r.source << ',' << r.seed << ',' << r.algo << ',' << r.m_size << ',' << r.opt_size
           << ',' << ratio_decimal(r.ratio) << ',' << r.ratio.frac() << '\n';
        auto key = std::make_pair(r.delta, r.algo);
        auto it = mins.find(key);
        if (it == mins.end()) {
            mins.emplace(key, r.ratio);
            order.push_back(key);
        } else if (r.ratio < it->second) {
            it->second = r.ratio;
        }
    }
    for (const auto& key : order) {
        const Rational& m = mins.at(key);
        os << key.first << ",min,," << key.second << ",,," << ratio_decimal(m) << ',' << m.frac() << '\n';
    }
    return os.str();
}

}  // namespace matchforge
