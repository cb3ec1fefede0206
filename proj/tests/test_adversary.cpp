#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "matchforge/charging.hpp"
#include "matchforge/error.hpp"
#include "matchforge/game.hpp"
#include "matchforge/generators.hpp"
#include "matchforge/hard_instance.hpp"
#include "matchforge/io.hpp"
#include "matchforge/matchers.hpp"
#include "matchforge/optimum.hpp"
#include "matchforge/worst_case.hpp"
#include "test_support.hpp"

using namespace matchforge;

namespace {

GameResult play_b(const std::string& algo, int delta) {
    auto enc = encode_priority(algo, delta, {}, 0);
    auto adv = HardInstanceAdversary::single_center(delta);
    return play_game(*enc, adv, delta);
}

GameResult play_truthful(const std::string& algo, const Graph& g) {
    auto enc = encode_priority(algo, std::max(1, g.delta()), {}, g.n());
    TruthfulServer server(g);
    return play_game(*enc, server, std::max(1, g.delta()));
}

Rational game_ratio(const GameResult& r) {
    auto opt = static_cast<std::int64_t>(maximum_matching(r.graph).size());
    return Rational(static_cast<std::int64_t>(r.matching.size()), opt);
}

class OnlyDegreeOne : public PriorityAlgorithm {
public:
    std::string name() const override { return "partial"; }
    PatternQuery query(const Knowledge&) const override {
        PatternQuery q;
        Pattern p;
        p.label = "unmatched=1";
        p.unmatched = CountRange::exactly(1);
        q.patterns.push_back(p);
        return q;
    }
};

}  // namespace

TEST(AdversaryB, MinGreedyMatchesTightFormulas) {
    for (int delta = 3; delta <= 8; ++delta) {
        GameResult r = play_b("mingreedy", delta);
        EXPECT_EQ(r.matching.size(), static_cast<std::size_t>(delta - 1)) << "delta " << delta;
        EXPECT_EQ(maximum_matching(r.graph).size(), static_cast<std::size_t>(2 * delta - 3)) << "delta " << delta;
        if (r.graph.n() <= 20) {
            EXPECT_EQ(oracle::max_matching_dp(r.graph), static_cast<std::size_t>(2 * delta - 3)) << "delta " << delta;
        }
        EXPECT_LE(r.graph.delta(), delta);
        EXPECT_EQ(game_ratio(r), target_ratio(delta));
    }
}

TEST(AdversaryB, TypeInvariantCheckedDuringRegularGame) {
    for (int delta = 4; delta <= 7; ++delta) {
        auto enc = encode_priority("mingreedy", delta);
        auto adv = HardInstanceAdversary::single_center(delta);
        play_game(*enc, adv, delta);
        EXPECT_GE(adv.invariant_checks(), static_cast<std::size_t>(delta - 3)) << "delta " << delta;
    }
}

TEST(AdversaryB, KarpSipserAtDeltaFour) {
    GameResult r = play_b("karpsipser", 4);
    EXPECT_EQ(game_ratio(r), Rational(3, 5));
}

TEST(AdversaryB, EveryEncodingIsHeldToTheBound) {
    for (const char* algo : {"mingreedy", "karpsipser", "greedy", "mrg", "shuffle", "vertex_iterative"})
        for (int delta = 3; delta <= 6; ++delta) {
            GameResult r = play_b(algo, delta);
            EXPECT_LE(game_ratio(r), target_ratio(delta)) << algo << " delta " << delta;
            EXPECT_TRUE(is_maximal(r.graph, r.matching));
        }
}

TEST(AdversaryB, CenterAtDeltaThree) {
    GameResult r = play_b("mingreedy", 3);
    EXPECT_EQ(r.graph.n(), 6);
    EXPECT_EQ(r.graph.m(), 7u);
    EXPECT_LE(r.graph.delta(), 3);
    EXPECT_EQ(maximum_matching(r.graph).size(), 3u);
    EXPECT_EQ(r.matching.size(), 2u);
    // Replayed offline, the exhaustive worst case of 1-2-MinGreedy is no better.
    WorstCaseResult w = worst_case_size(r.graph, Algo::one_two_min_greedy);
    EXPECT_EQ(w.size, 2u);
    EXPECT_EQ(oracle::naive_worst(r.graph, true), 2u);
}

TEST(AdversaryB, DeltaFiveOptimum) {
    GameResult r = play_b("mingreedy", 5);
    EXPECT_EQ(maximum_matching(r.graph).size(), 7u);
    EXPECT_EQ(oracle::max_matching_dp(r.graph), 7u);
}

TEST(AdversaryBPrime, UsesExactlyTheAnnouncedNodes) {
    for (int t : {7, 8, 20, 33}) {
        auto enc = encode_priority("mingreedy", 3);
        auto adv = HardInstanceAdversary::multi_center(3, t);
        GameResult r = play_game(*enc, adv, 3);
        EXPECT_EQ(r.graph.n(), 3 * t);
        EXPECT_LE(r.graph.delta(), 3);
        EXPECT_TRUE(is_maximal(r.graph, r.matching));
    }
    for (int delta = 4; delta <= 6; ++delta) {
        auto enc = encode_priority("mingreedy", delta);
        auto adv = HardInstanceAdversary::multi_center(delta, 20);
        GameResult r = play_game(*enc, adv, delta);
        EXPECT_EQ(r.graph.n(), 20 * delta);
        EXPECT_LE(r.graph.delta(), delta);
        EXPECT_GE(adv.centers_opened(), 2u);
    }
}

TEST(AdversaryBPrime, ExcessShrinksWithBudget) {
    Rational prev(1);
    for (int t : {20, 50, 100}) {
        auto enc = encode_priority("mingreedy", 3);
        auto adv = HardInstanceAdversary::multi_center(3, t);
        GameResult r = play_game(*enc, adv, 3);
        Rational excess = game_ratio(r) - Rational(2, 3);
        EXPECT_GE(excess, Rational(0));
        EXPECT_LE(excess, prev) << "t " << t;
        prev = excess;
    }
    EXPECT_LE(prev, Rational(1, 50));
}

TEST(AdversaryBPrime, RejectsSmallBudget) {
    EXPECT_THROW(HardInstanceAdversary::multi_center(3, 6), InputError);
    EXPECT_THROW(HardInstanceAdversary::single_center(2), InputError);
}

TEST(AdversaryBPrime, FillerSizes) {
    for (int delta = 3; delta <= 8; ++delta)
        for (int nu = 2 * delta; nu <= 6 * delta; ++nu) {
            std::vector<int> s = HardInstanceAdversary::filler_sizes(nu, delta);
            EXPECT_EQ(std::accumulate(s.begin(), s.end(), 0), nu);
            int triangles = 0;
            for (int x : s) {
                if (x == 3) ++triangles;
                else {
                    EXPECT_GE(x, 4);
                    EXPECT_LE(x, delta + 2);
                }
            }
            EXPECT_LE(triangles, 3) << "nu " << nu << " delta " << delta;
            if (delta >= 4) {
                EXPECT_EQ(triangles, 0) << "nu " << nu << " delta " << delta;
            }
        }
    EXPECT_EQ(HardInstanceAdversary::filler_sizes(10, 3), (std::vector<int>{5, 5}));
    EXPECT_EQ(HardInstanceAdversary::filler_sizes(0, 3), std::vector<int>{});
}

TEST(Encodings, PathOfThree) {
    Graph p3 = make_path(3);
    EXPECT_EQ(play_truthful("mingreedy", p3).matching, run_min_greedy(p3, Policy::first()).result);
    GameResult ks = play_truthful("karpsipser", p3);
    ASSERT_EQ(ks.matching.size(), 1u);
    EXPECT_TRUE(ks.matching.contains(Edge(0, 1)));
}

TEST(Encodings, AgreeWithDirectImplementations) {
    for (std::uint64_t s = 0; s < 400; ++s) {
        Graph g = oracle::random_capped(6 + static_cast<NodeId>(s % 10), 3 + static_cast<int>(s % 4), 0.35, s);
        EXPECT_EQ(play_truthful("mingreedy", g).matching, run_min_greedy(g, Policy::first()).result) << "seed " << s;
        EXPECT_EQ(play_truthful("karpsipser", g).matching, run_karp_sipser(g, Policy::first()).result) << "seed " << s;
        EXPECT_EQ(play_truthful("greedy", g).matching, run_greedy(g, Policy::first()).result) << "seed " << s;
        std::vector<NodeId> perm(static_cast<std::size_t>(g.n()));
        std::iota(perm.begin(), perm.end(), 0);
        Rng rng(s);
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
        auto enc = encode_shuffle(perm);
        TruthfulServer server(g);
        EXPECT_EQ(play_game(*enc, server, std::max(1, g.delta())).matching, run_shuffle(g, perm).result) << "seed " << s;
    }
}

TEST(Game, ServedListsMatchFinalGraph) {
    GameResult r = play_b("greedy", 6);
    ASSERT_EQ(r.served.size(), r.picks.size());
    for (const DataItem& item : r.served) {
        auto a = item.neighbors;
        std::sort(a.begin(), a.end());
        EXPECT_EQ(a, r.graph.neighbors(item.node));
    }
    std::istringstream in(r.transcript);
    std::string line;
    std::size_t serves = 0;
    while (std::getline(in, line)) {
        std::string tag = line.substr(0, line.find(' '));
        EXPECT_TRUE(tag == "q" || tag == "build" || tag == "serve" || tag == "match") << line;
        serves += tag == "serve";
    }
    EXPECT_EQ(serves, r.picks.size());
}

TEST(Game, NonTotalPatternListIsRejected) {
    OnlyDegreeOne algo;
    TruthfulServer server(make_path(3));
    EXPECT_THROW(play_game(algo, server, 2), InputError);
    auto adv = HardInstanceAdversary::single_center(3);
    EXPECT_THROW(play_game(algo, adv, 3), InputError);
}

TEST(Game, EmitWritesReplayableFiles) {
    auto dir = oracle::scratch_dir("emit");
    GameResult r = play_b("mingreedy", 4);
    EmittedGame e = emit_game(r, (dir / "h4").string());
    ASSERT_TRUE(e.has_trace);
    for (const auto& f : e.files) EXPECT_TRUE(std::filesystem::exists(f)) << f;
    Graph g = load_graph((dir / "h4.graph").string());
    EXPECT_EQ(g.n(), r.graph.n());
    EXPECT_EQ(g.edges(), r.graph.edges());
    RunTrace t = load_trace((dir / "h4.trace").string());
    replay_trace(g, t);
    EXPECT_EQ(t.result, r.matching);
    Verification v = verify_run(g, t, 4);
    EXPECT_TRUE(v.report.all_pass());
    EXPECT_EQ(v.report.ratio, Rational(3, 5));
}

TEST(GameCli, GameCommand) {
    auto dir = oracle::scratch_dir("game_cli");
    const std::string prefix = (dir / "h3").string();
    EXPECT_EQ(oracle::run_cli("game --algo mingreedy --adversary B --delta 3 --emit " + prefix), 0);
    EXPECT_EQ(load_graph(prefix + ".graph").n(), 6);
    EXPECT_EQ(oracle::run_cli("verify --in " + prefix + ".graph --trace " + prefix + ".trace"), 0);
    EXPECT_EQ(oracle::run_cli("game --algo mingreedy --adversary Bprime --delta 3 --t 20 --emit " + prefix + "p"), 0);
    EXPECT_EQ(load_graph(prefix + "p.graph").n(), 60);
    EXPECT_EQ(oracle::run_cli("game --algo mingreedy --adversary Bprime --delta 3 --t 5"), 2);
    EXPECT_EQ(oracle::run_cli("game --algo nosuch --adversary B --delta 3"), 2);
}
