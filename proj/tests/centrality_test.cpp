#include "projgraph/centrality.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace projgraph;

namespace {

TEST(DegreeCentrality, WorkedExamplePeerDegree) {
    auto [g, m] = testsupport::worked_example();
    ProjectionGraph pg = build_projection(g, m);
    CentralityVector cv = degree_centrality(pg, false);
    EXPECT_DOUBLE_EQ(cv.scores[1], 3.0);  // C_D(P2) = 3
}

TEST(DegreeCentrality, SinglePeerIsZeroAndNormalizationDegenerates) {
    auto [g, m] = testsupport::worked_example();
    ProjectionGraph pg = build_projection(g, Mapping::all_on_one(g.node_count()));
    EXPECT_DOUBLE_EQ(degree_centrality(pg, false).scores[0], 0.0);
    CentralityVector norm = degree_centrality(pg, true);
    EXPECT_TRUE(norm.degenerate);
    EXPECT_DOUBLE_EQ(norm.scores[0], 0.0);
}

// Direct PG degree must equal the user-degree expression: cumulative user
// degree, minus twice the intra-peer edges, minus (w_ij - 1) per neighbor
// bundle.
TEST(DegreeCentrality, PeerDegreeIdentityOnRandomPairs) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(14, 0.3, seed);
        Mapping m = testsupport::random_mapping(14, 5, seed * 7 + 2);
        ProjectionGraph pg = build_projection(g, m);
        CentralityVector user_deg = degree_centrality(g, false);
        CentralityVector peer_deg = degree_centrality(pg, false);
        for (PeerId p = 0; p < pg.peer_count(); ++p) {
            double cumulative = 0.0;
            for (NodeId u = 0; u < g.node_count(); ++u) {
                if (m.peer_of[u] == p) cumulative += user_deg.scores[u];
            }
            double rhs = cumulative - 2.0 * static_cast<double>(pg.intra_edges(p));
            for (const auto& nb : pg.neighbors(p)) {
                rhs -= static_cast<double>(nb.weight - 1);
            }
            EXPECT_DOUBLE_EQ(peer_deg.scores[p], rhs);
        }
    }
}

TEST(NodeBetweenness, PathAndStarExamples) {
    CentralityVector p3 = node_betweenness(testsupport::path_graph(3), false);
    EXPECT_DOUBLE_EQ(p3.scores[1], 1.0);
    EXPECT_DOUBLE_EQ(p3.scores[0], 0.0);

    CentralityVector star = node_betweenness(testsupport::star_graph(5), false);
    EXPECT_DOUBLE_EQ(star.scores[0], 10.0);  // C(5,2) unordered leaf pairs
    for (NodeId u = 1; u <= 5; ++u) EXPECT_DOUBLE_EQ(star.scores[u], 0.0);
}

TEST(NodeBetweenness, MatchesOracleOnRandomGraphs) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(4 + seed % 7, 0.35, seed);
        auto oracle = testsupport::brute_force_betweenness(testsupport::DenseGraph::from_social(g));
        CentralityVector cv = node_betweenness(g, false);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            EXPECT_NEAR(cv.scores[u], oracle.node[u], 1e-9);
        }
    }
}

TEST(NodeBetweenness, WeightedModeMatchesOracleOnProjections) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(12, 0.3, seed);
        Mapping m = testsupport::random_mapping(12, 5, seed + 11);
        ProjectionGraph pg = build_projection(g, m);
        auto oracle = testsupport::brute_force_betweenness(
            testsupport::DenseGraph::from_projection(pg, true));
        CentralityVector cv = node_betweenness(pg, DistanceMode::inverse_weight, false);
        for (PeerId p = 0; p < pg.peer_count(); ++p) {
            EXPECT_NEAR(cv.scores[p], oracle.node[p], 1e-9);
        }
    }
}

TEST(EdgeBetweenness, TinyExamples) {
    CentralityVector k2 = edge_betweenness(testsupport::path_graph(2), false);
    EXPECT_DOUBLE_EQ(k2.edge_scores[0], 1.0);

    CentralityVector p3 = edge_betweenness(testsupport::path_graph(3), false);
    ASSERT_EQ(p3.edge_keys.size(), 2u);
    EXPECT_DOUBLE_EQ(p3.edge_scores[0], 2.0);
    EXPECT_DOUBLE_EQ(p3.edge_scores[1], 2.0);
}

// Triangle of peers with bundle weights (3,1,1): inverse-weight lengths make
// the heavy edge the shortcut.
TEST(EdgeBetweenness, WeightedTriangleMatchesOracle) {
    std::vector<EdgeKey> edges = {{0, 3}, {1, 4}, {2, 5}, {3, 6}, {0, 6}};
    SocialGraph g = SocialGraph::from_edges(9, std::move(edges));
    Mapping m = Mapping::from_labels(std::vector<int>{0, 0, 0, 1, 1, 1, 2, 2, 2});
    ProjectionGraph pg = build_projection(g, m);
    ASSERT_EQ(pg.weight(0, 1), 3u);
    ASSERT_EQ(pg.weight(1, 2), 1u);
    ASSERT_EQ(pg.weight(0, 2), 1u);

    auto oracle =
        testsupport::brute_force_betweenness(testsupport::DenseGraph::from_projection(pg, true));
    CentralityVector cv = edge_betweenness(pg, DistanceMode::inverse_weight, false);
    for (std::size_t i = 0; i < cv.edge_keys.size(); ++i) {
        EXPECT_NEAR(cv.edge_scores[i], oracle.edge.at(cv.edge_keys[i]), 1e-9);
    }
}

TEST(EdgeBetweenness, EqualLengthTieSplitsPaths) {
    // weights (1,2,2) produce an exact two-way tie between the direct edge
    // and the two-hop route
    std::vector<EdgeKey> edges = {{0, 3}, {3, 6}, {4, 7}, {1, 6}, {2, 7}};
    SocialGraph g = SocialGraph::from_edges(9, std::move(edges));
    Mapping m = Mapping::from_labels(std::vector<int>{0, 0, 0, 1, 1, 1, 2, 2, 2});
    ProjectionGraph pg = build_projection(g, m);
    ASSERT_EQ(pg.weight(0, 1), 1u);
    ASSERT_EQ(pg.weight(1, 2), 2u);
    ASSERT_EQ(pg.weight(0, 2), 2u);
    auto oracle =
        testsupport::brute_force_betweenness(testsupport::DenseGraph::from_projection(pg, true));
    CentralityVector nodes = node_betweenness(pg, DistanceMode::inverse_weight, false);
    CentralityVector cv = edge_betweenness(pg, DistanceMode::inverse_weight, false);
    EXPECT_NEAR(nodes.scores[2], 0.5, 1e-12);
    for (std::size_t i = 0; i < cv.edge_keys.size(); ++i) {
        EXPECT_NEAR(cv.edge_scores[i], oracle.edge.at(cv.edge_keys[i]), 1e-9);
    }
}

TEST(EdgeBetweenness, MatchesOracleOnRandomGraphs) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(4 + seed % 7, 0.35, seed + 500);
        auto oracle = testsupport::brute_force_betweenness(testsupport::DenseGraph::from_social(g));
        CentralityVector cv = edge_betweenness(g, false);
        for (std::size_t i = 0; i < cv.edge_keys.size(); ++i) {
            EXPECT_NEAR(cv.edge_scores[i], oracle.edge.at(cv.edge_keys[i]), 1e-9);
        }
    }
}

TEST(Betweenness, DegreeOneNodesScoreZero) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(10, 0.2, seed);
        CentralityVector cv = node_betweenness(g, false);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            if (g.degree(u) == 1) EXPECT_DOUBLE_EQ(cv.scores[u], 0.0);
        }
    }
}

TEST(Betweenness, SumRuleAgainstOraclePairTotals) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(9, 0.3, seed + 90);
        auto oracle = testsupport::brute_force_betweenness(testsupport::DenseGraph::from_social(g));
        CentralityVector cv = node_betweenness(g, false);
        double brandes_total = 0.0, pair_total = 0.0;
        for (double x : cv.scores) brandes_total += x;
        for (const auto& [pair, avg] : oracle.pair_interior_avg) pair_total += avg;
        EXPECT_NEAR(brandes_total, pair_total, 1e-9);
    }
}

TEST(Betweenness, NormalizationPreservesRanking) {
    SocialGraph g = testsupport::random_connected_graph(10, 0.3, 77);
    CentralityVector raw = node_betweenness(g, false);
    CentralityVector norm = node_betweenness(g, true);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (NodeId v = 0; v < g.node_count(); ++v) {
            EXPECT_EQ(raw.scores[u] < raw.scores[v], norm.scores[u] < norm.scores[v]);
        }
    }
}

TEST(Betweenness, ParallelAgreesWithSequential) {
    SocialGraph g = testsupport::random_connected_graph(60, 0.1, 13);
    CentralityVector seq = node_betweenness(g, false, 1);
    CentralityVector par = node_betweenness(g, false, 4);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        EXPECT_NEAR(seq.scores[u], par.scores[u], 1e-9);
    }
    CentralityVector eseq = edge_betweenness(g, false, 1);
    CentralityVector epar = edge_betweenness(g, false, 4);
    for (std::size_t i = 0; i < eseq.edge_scores.size(); ++i) {
        EXPECT_NEAR(eseq.edge_scores[i], epar.edge_scores[i], 1e-9);
    }
}

TEST(CumulativeEstimate, SumsUserScoresPerPeer) {
    // users 3 and 5 with degrees 2 and 4 on one peer -> 6
    SocialGraph g = SocialGraph::from_edges(
        7, {{3, 0}, {3, 1}, {5, 0}, {5, 1}, {5, 2}, {5, 6}, {0, 1}});
    Mapping m = Mapping::from_labels(std::vector<int>{1, 1, 1, 0, 2, 0, 2});
    CentralityVector user_deg = degree_centrality(g, false);
    CentralityVector peer_sum = cumulative_estimate(user_deg, m);
    EXPECT_EQ(peer_sum.scope, Scope::peer);
    EXPECT_DOUBLE_EQ(peer_sum.scores[m.peer_of[3]], 6.0);
}

TEST(CumulativeEstimate, SingletonMappingIsIdentity) {
    SocialGraph g = testsupport::random_connected_graph(9, 0.3, 3);
    CentralityVector nb = node_betweenness(g, false);
    CentralityVector est = cumulative_estimate(nb, Mapping::singletons(g.node_count()));
    for (NodeId u = 0; u < g.node_count(); ++u) {
        EXPECT_DOUBLE_EQ(est.scores[u], nb.scores[u]);
    }
}

TEST(CumulativeEstimate, WorkedExampleBundleSum) {
    auto [g, m] = testsupport::worked_example();
    auto oracle = testsupport::brute_force_betweenness(testsupport::DenseGraph::from_social(g));
    CentralityVector sg_eb = edge_betweenness(g, false);
    CentralityVector pg_eb = cumulative_estimate(sg_eb, m);
    // Θ_24 = {d-k, d-l, d-m}
    const double expected = oracle.edge.at(EdgeKey(3, 10)) + oracle.edge.at(EdgeKey(3, 11)) +
                            oracle.edge.at(EdgeKey(3, 12));
    EXPECT_NEAR(pg_eb.edge_score(EdgeKey(1, 3)), expected, 1e-9);
}

TEST(CumulativeEstimate, RejectsPeerScopedInput) {
    auto [g, m] = testsupport::worked_example();
    ProjectionGraph pg = build_projection(g, m);
    CentralityVector peer_deg = degree_centrality(pg, false);
    EXPECT_THROW(cumulative_estimate(peer_deg, m), ValidationError);
}

TEST(Decomposition, SingletonMappingPutsEverythingInDistinctPeers) {
    SocialGraph g = testsupport::random_connected_graph(8, 0.35, 21);
    Mapping m = Mapping::singletons(g.node_count());
    CentralityVector nb = node_betweenness(g, false);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto d = betweenness_decomposition_check(g, m, u);
        EXPECT_DOUBLE_EQ(d.endpoint_on_us_peer, 0.0);
        EXPECT_DOUBLE_EQ(d.pair_on_other_peer, 0.0);
        EXPECT_DOUBLE_EQ(d.all_same_peer, 0.0);
        EXPECT_NEAR(d.all_distinct_peers, d.total, 1e-12);
        EXPECT_NEAR(d.total, nb.scores[u], 1e-9);
    }
    auto edges = g.edges();
    auto ed = edge_decomposition_check(g, m, edges.front());
    EXPECT_NEAR(ed.inter_cross_peers, ed.total, 1e-12);
    EXPECT_DOUBLE_EQ(ed.intra_same_peer, 0.0);
}

TEST(Decomposition, OnePeerMappingPutsEverythingInSamePeer) {
    SocialGraph g = testsupport::random_connected_graph(8, 0.35, 22);
    Mapping m = Mapping::all_on_one(g.node_count());
    auto d = betweenness_decomposition_check(g, m, 2);
    EXPECT_NEAR(d.all_same_peer, d.total, 1e-12);
    EXPECT_DOUBLE_EQ(d.all_distinct_peers, 0.0);
    auto ed = edge_decomposition_check(g, m, g.edges().front());
    EXPECT_NEAR(ed.intra_same_peer, ed.total, 1e-12);
    EXPECT_DOUBLE_EQ(ed.inter_cross_peers, 0.0);
}

TEST(Decomposition, CategorySumsMatchBrandesTotals) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(10, 0.3, seed + 300);
        Mapping m = testsupport::random_mapping(g.node_count(), 3, seed + 301);
        CentralityVector nb = node_betweenness(g, false);
        CentralityVector eb = edge_betweenness(g, false);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            auto d = betweenness_decomposition_check(g, m, u);
            const double sum = d.all_distinct_peers + d.endpoint_on_us_peer +
                               d.pair_on_other_peer + d.all_same_peer;
            EXPECT_NEAR(sum, d.total, 1e-12);
            EXPECT_NEAR(d.total, nb.scores[u], 1e-9);
        }
        for (std::size_t i = 0; i < eb.edge_keys.size(); ++i) {
            auto d = edge_decomposition_check(g, m, eb.edge_keys[i]);
            const double sum = d.inter_cross_peers + d.intra_same_peer + d.intra_cross_peers +
                               d.inter_same_peer + d.intra_other_peer;
            EXPECT_NEAR(sum, d.total, 1e-12);
            EXPECT_NEAR(d.total, eb.edge_scores[i], 1e-9);
        }
    }
}

}  // namespace
