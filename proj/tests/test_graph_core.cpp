#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "matchforge/error.hpp"
#include "matchforge/generators.hpp"
#include "matchforge/graph.hpp"
#include "matchforge/io.hpp"
#include "matchforge/residual.hpp"
#include "test_support.hpp"

using namespace matchforge;
using oracle::graph_of;

namespace {

std::vector<std::pair<int, int>> pairs_of(const std::vector<Edge>& es) {
    std::vector<std::pair<int, int>> out;
    for (const Edge& e : es) out.emplace_back(e.u, e.v);
    return out;
}

}  // namespace

TEST(GraphFormat, ParsesPathOfThree) {
    Graph g = parse_graph("graph 3\ne 0 1\ne 1 2\n");
    EXPECT_EQ(g.n(), 3);
    EXPECT_EQ(g.m(), 2);
    EXPECT_EQ(g.delta(), 2);
}

TEST(GraphFormat, RejectsSelfLoopWithLineNumber) {
    try {
        parse_graph("graph 2\ne 0 0\n");
        FAIL() << "self-loop accepted";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}

TEST(GraphFormat, ParsesFourCycle) {
    Graph g = parse_graph("graph 4\ne 0 1\ne 1 2\ne 2 3\ne 3 0\n");
    EXPECT_EQ(g.m(), 4);
    EXPECT_EQ(g.delta(), 2);
    for (NodeId v = 0; v < 4; ++v) EXPECT_EQ(g.degree(v), 2);
}

TEST(GraphFormat, RejectsMalformedInputs) {
    EXPECT_THROW(parse_graph("graph 3\ne 0 3\n"), InputError);
    EXPECT_THROW(parse_graph("graph 3\ne 0 1\ne 1 0\n"), InputError);
    EXPECT_THROW(parse_graph("graph 3\ne 0\n"), InputError);
    EXPECT_THROW(parse_graph("graph 3 2\ne 0 1\n"), InputError);
    EXPECT_THROW(parse_graph("e 0 1\n"), InputError);
    EXPECT_THROW(parse_graph("graph -1\n"), InputError);
    EXPECT_THROW(parse_graph("graph 3\nx 0 1\n"), InputError);
}

TEST(GraphFormat, DuplicateReportedAtSecondOccurrence) {
    try {
        parse_graph("# c\ngraph 3\ne 0 1\ne 1 2\ne 1 0\n");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 5"), std::string::npos) << e.what();
    }
}

TEST(GraphFormat, CommentsAndHeaderCount) {
    Graph g = parse_graph("# hello\ngraph 3 2\n# mid\ne 2 1\ne 0 1\n");
    EXPECT_EQ(pairs_of(g.edges()), (std::vector<std::pair<int, int>>{{0, 1}, {1, 2}}));
}

TEST(GraphFormat, RoundTripOnRandomGraphs) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        Graph g = gen_random_bounded(15, 4, 0.4, s);
        Graph h = parse_graph(format_graph(g));
        EXPECT_EQ(g.n(), h.n());
        EXPECT_EQ(g.edges(), h.edges());
    }
}

TEST(GraphFormat, FileRoundTrip) {
    auto dir = std::filesystem::temp_directory_path() / "mf_graph_core_test";
    std::filesystem::create_directories(dir);
    Graph g = make_petersen();
    save_graph(g, (dir / "p.graph").string());
    EXPECT_EQ(load_graph((dir / "p.graph").string()).edges(), g.edges());
    Matching m({Edge(0, 1), Edge(2, 3)});
    save_matching(m, (dir / "p.matching").string());
    EXPECT_EQ(load_matching((dir / "p.matching").string(), &g), m);
    EXPECT_THROW(load_graph((dir / "missing.graph").string()), InputError);
}

TEST(MatchingFormat, ValidatesAgainstGraph) {
    Graph g = graph_of(4, {{0, 1}, {1, 2}, {2, 3}});
    EXPECT_THROW(parse_matching("m 0 1\nm 1 2\n", &g), InputError);
    EXPECT_THROW(parse_matching("m 0 2\n", &g), InputError);
    EXPECT_EQ(parse_matching("m 1 0\nm 3 2\n", &g).size(), 2u);
}

TEST(Graph, ConstructorRejectsInvalidEdges) {
    EXPECT_THROW(graph_of(3, {{0, 0}}), InputError);
    EXPECT_THROW(graph_of(3, {{0, 3}}), InputError);
    EXPECT_THROW(graph_of(3, {{0, 1}, {1, 0}}), InputError);
}

TEST(Graph, MaximalityCheck) {
    Graph g = graph_of(4, {{0, 1}, {1, 2}, {2, 3}});
    EXPECT_FALSE(is_maximal(g, Matching({Edge(0, 1)})));
    EXPECT_TRUE(is_maximal(g, Matching({Edge(1, 2)})));
}

TEST(ResidualView, RemovePairOnFourCycle) {
    Graph c4 = make_cycle(4);
    ResidualView view(c4);
    auto removed = view.remove_pair(0, 1);
    EXPECT_EQ(pairs_of(removed), (std::vector<std::pair<int, int>>{{0, 1}, {0, 3}, {1, 2}}));
    EXPECT_EQ(view.degree(0), 0);
    EXPECT_EQ(view.degree(1), 0);
    EXPECT_EQ(view.degree(2), 1);
    EXPECT_EQ(view.degree(3), 1);
}

TEST(ResidualView, RemovePairOnPathOfThree) {
    Graph p3 = make_path(3);
    ResidualView view(p3);
    EXPECT_EQ(pairs_of(view.remove_pair(0, 1)), (std::vector<std::pair<int, int>>{{0, 1}, {1, 2}}));
    EXPECT_EQ(view.degree(2), 0);
    EXPECT_TRUE(view.empty());
}

TEST(ResidualView, RemovePairOnK4LeavesOneEdge) {
    Graph k4 = make_complete(4);
    ResidualView view(k4);
    EXPECT_EQ(view.remove_pair(0, 1).size(), 5u);
    EXPECT_TRUE(view.alive(2, 3));
    EXPECT_EQ(view.alive_edges().size(), 1u);
}

TEST(ResidualView, RemovingDeadEdgeIsAnError) {
    Graph p3 = make_path(3);
    ResidualView view(p3);
    view.remove_pair(0, 1);
    EXPECT_THROW(view.remove_pair(1, 2), InputError);
    EXPECT_THROW(view.remove_pair(0, 2), InputError);
}

TEST(ResidualView, MinDegreeNodesExamples) {
    Graph p3 = make_path(3);
    EXPECT_EQ(ResidualView(p3).min_degree_nodes(), (std::vector<NodeId>{0, 2}));
    Graph c4 = make_cycle(4);
    EXPECT_EQ(ResidualView(c4).min_degree_nodes(), (std::vector<NodeId>{0, 1, 2, 3}));
    Graph star = make_star(3);
    EXPECT_EQ(ResidualView(star).min_degree_nodes(), (std::vector<NodeId>{1, 2, 3}));
}

TEST(ResidualView, MinDegreeOnEmptyViewIsAnError) {
    Graph g(3);
    ResidualView view(g);
    EXPECT_THROW(view.min_degree_nodes(), InternalError);
}

// Random removal sequences compared against a set-based residual graph.
TEST(ResidualView, AgreesWithNaiveResidualOnRandomSequences) {
    for (std::uint64_t s = 0; s < 500; ++s) {
        Graph g = gen_random_bounded(14, 5, 0.5, s);
        ResidualView view(g);
        oracle::NaiveResidual naive(g);
        Rng rng(s + 99);
        while (!view.empty()) {
            ASSERT_EQ(view.min_degree_nodes(), naive.min_nodes());
            for (NodeId v = 0; v < g.n(); ++v) ASSERT_EQ(view.degree(v), naive.deg(v));
            auto alive = view.alive_edges();
            ASSERT_EQ(alive.size(), naive.edges().size());
            const Edge& e = g.edge(alive[rng.index(alive.size())]);
            std::set<std::pair<int, int>> expect;
            for (NodeId x : {e.u, e.v})
                for (NodeId y : naive.adj[static_cast<std::size_t>(x)]) expect.insert({std::min(x, y), std::max(x, y)});
            auto removed = view.remove_pair(e.u, e.v);
            naive.remove(e.u, e.v);
            auto got = pairs_of(removed);
            ASSERT_TRUE(std::is_sorted(got.begin(), got.end()));
            std::set<std::pair<int, int>> got_set(got.begin(), got.end());
            ASSERT_EQ(got_set, expect);
        }
        ASSERT_TRUE(naive.empty());
    }
}

TEST(Generators, RandomBoundedSingleNode) {
    EXPECT_EQ(gen_random_bounded(1, 3, 1.0, 5).m(), 0);
}

TEST(Generators, RandomBoundedIsDeterministic) {
    EXPECT_EQ(gen_random_bounded(20, 3, 1.0, 7).edges(), gen_random_bounded(20, 3, 1.0, 7).edges());
}

TEST(Generators, RandomBoundedRespectsDegreeBound) {
    for (std::uint64_t s = 0; s < 1000; ++s) ASSERT_LE(gen_random_bounded(20, 3, 0.5, s).delta(), 3);
}

TEST(Generators, RegularOnFourNodesIsK4) {
    EXPECT_EQ(gen_regular(4, 3, 0).edges(), make_complete(4).edges());
}

TEST(Generators, TwoRegularCoversAllNodes) {
    Graph g = gen_regular(6, 2, 0);
    EXPECT_EQ(g.m(), 6);
    for (NodeId v = 0; v < 6; ++v) EXPECT_EQ(g.degree(v), 2);
}

TEST(Generators, CubicOnTenNodes) {
    Graph g = gen_regular(10, 3, 1);
    for (NodeId v = 0; v < 10; ++v) EXPECT_EQ(g.degree(v), 3);
}

TEST(Generators, RegularInfeasibleInputs) {
    EXPECT_THROW(gen_regular(5, 3, 0), InputError);
    EXPECT_THROW(gen_regular(4, 4, 0), InputError);
}

TEST(Generators, Petersen) {
    Graph g = make_petersen();
    EXPECT_EQ(g.n(), 10);
    EXPECT_EQ(g.m(), 15);
    for (NodeId v = 0; v < 10; ++v) EXPECT_EQ(g.degree(v), 3);
}

TEST(Components, Examples) {
    EXPECT_EQ(connected_components(make_path(3)), (std::vector<std::vector<NodeId>>{{0, 1, 2}}));
    EXPECT_EQ(connected_components(graph_of(4, {{0, 1}, {2, 3}})), (std::vector<std::vector<NodeId>>{{0, 1}, {2, 3}}));
    EXPECT_EQ(connected_components(Graph(3)), (std::vector<std::vector<NodeId>>{{0}, {1}, {2}}));
}
