#include "projgraph/projection.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "support/generators.hpp"

using namespace projgraph;

namespace {

TEST(BuildProjection, WorkedExampleBundleWeight) {
    auto [g, m] = testsupport::worked_example();
    ProjectionGraph pg = build_projection(g, m);
    EXPECT_EQ(pg.peer_count(), 5u);
    EXPECT_EQ(pg.weight(1, 3), 3u);  // w(P2, P4) = 3 via the d-k, d-l, d-m edges
    EXPECT_EQ(pg.weight(3, 1), 3u);
    EXPECT_EQ(pg.degree(1), 3u);
    EXPECT_EQ(pg.weight(1, 4), 0u);
}

TEST(BuildProjection, AllUsersOnOnePeer) {
    auto [g, m] = testsupport::worked_example();
    ProjectionGraph pg = build_projection(g, Mapping::all_on_one(g.node_count()));
    EXPECT_EQ(pg.peer_count(), 1u);
    EXPECT_EQ(pg.edge_count(), 0u);
    EXPECT_EQ(pg.intra_edges(0), g.edge_count());
}

TEST(BuildProjection, SingletonPeersMirrorTheSocialGraph) {
    SocialGraph g = testsupport::random_connected_graph(12, 0.25, 4);
    ProjectionGraph pg = build_projection(g, Mapping::singletons(g.node_count()));
    EXPECT_EQ(pg.peer_count(), g.node_count());
    EXPECT_EQ(pg.edge_count(), g.edge_count());
    for (const auto& [key, w] : pg.edges()) {
        EXPECT_EQ(w, 1u);
        EXPECT_TRUE(g.has_edge(key.a, key.b));
    }
    for (PeerId p = 0; p < pg.peer_count(); ++p) EXPECT_EQ(pg.intra_edges(p), 0u);
}

TEST(BuildProjection, ConservationSymmetryConnectivity) {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(20, 0.2, seed);
        Mapping m = testsupport::random_mapping(20, 6, seed * 31 + 1);
        ProjectionGraph pg = build_projection(g, m);

        std::uint64_t weight_sum = 0;
        for (const auto& [key, w] : pg.edges()) {
            weight_sum += w;
            EXPECT_EQ(pg.weight(key.a, key.b), pg.weight(key.b, key.a));
        }
        const std::uint64_t intra_sum = std::accumulate(pg.intra_edge_counts().begin(),
                                                        pg.intra_edge_counts().end(),
                                                        std::uint64_t{0});
        EXPECT_EQ(weight_sum + intra_sum, g.edge_count());

        // connected SG projects onto a connected PG for any total mapping
        std::vector<bool> seen(pg.peer_count(), false);
        std::vector<PeerId> queue{0};
        seen[0] = true;
        std::size_t visited = 0;
        while (!queue.empty()) {
            PeerId p = queue.back();
            queue.pop_back();
            ++visited;
            for (const auto& nb : pg.neighbors(p)) {
                if (!seen[nb.peer]) {
                    seen[nb.peer] = true;
                    queue.push_back(nb.peer);
                }
            }
        }
        EXPECT_EQ(visited, pg.peer_count());
    }
}

TEST(BuildProjection, CoarseningNeverAddsEdges) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(16, 0.25, seed);
        Mapping m = testsupport::random_mapping(16, 6, seed + 50);
        if (m.peer_count < 2) continue;
        ProjectionGraph before = build_projection(g, m);
        // merge the last two peers
        Mapping coarser = m;
        for (auto& p : coarser.peer_of) {
            if (p == coarser.peer_count - 1) p = coarser.peer_count - 2;
        }
        coarser.peer_count -= 1;
        ProjectionGraph after = build_projection(g, coarser);
        EXPECT_LE(after.edge_count(), before.edge_count());
    }
}

TEST(EdgeBalance, SingletonMappingAverages) {
    SocialGraph g = testsupport::path_graph(4);
    ProjectionGraph pg = build_projection(g, Mapping::singletons(4));
    EdgeBalance b = edge_balance_report(pg);
    EXPECT_DOUBLE_EQ(b.avg_intra_per_peer, 0.0);
    EXPECT_DOUBLE_EQ(b.avg_inter_per_edge, 1.0);
    EXPECT_FALSE(b.no_pg_edges);
}

TEST(EdgeBalance, OnePeerMappingFlagsMissingInterAverage) {
    SocialGraph g = testsupport::path_graph(3);
    ProjectionGraph pg = build_projection(g, Mapping::all_on_one(3));
    EdgeBalance b = edge_balance_report(pg);
    EXPECT_DOUBLE_EQ(b.avg_intra_per_peer, 2.0);
    EXPECT_DOUBLE_EQ(b.avg_inter_per_edge, 0.0);
    EXPECT_TRUE(b.no_pg_edges);
}

}  // namespace
