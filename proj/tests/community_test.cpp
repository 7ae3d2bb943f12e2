#include "projgraph/community.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace projgraph;

namespace {

TEST(Modularity, AllOnOneCommunityIsZero) {
    SocialGraph g = testsupport::two_cliques_bridge();
    EXPECT_NEAR(modularity(g, Mapping::all_on_one(g.node_count())), 0.0, 1e-15);
}

TEST(Modularity, SingletonFormula) {
    SocialGraph g = testsupport::star_graph(4);
    const double m2 = 2.0 * static_cast<double>(g.edge_count());
    double expected = 0.0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const double k = static_cast<double>(g.degree(u));
        expected -= k * k / (m2 * m2);
    }
    EXPECT_NEAR(modularity(g, Mapping::singletons(g.node_count())), expected, 1e-15);
}

TEST(Modularity, MatchesDefinitionOnRandomPartitions) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(9, 0.35, seed);
        Mapping m = testsupport::random_mapping(g.node_count(), 4, seed + 100);
        EXPECT_NEAR(modularity(g, m), testsupport::modularity_by_definition(g, m.peer_of), 1e-12);
    }
}

TEST(Modularity, CliquePartitionOfTwoCliquesIsOptimal) {
    SocialGraph g = testsupport::two_cliques_bridge();
    Mapping cliques = Mapping::from_labels(std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1});
    const double best = testsupport::best_partition_modularity(g);
    EXPECT_NEAR(modularity(g, cliques), best, 1e-12);
}

TEST(Modularity, EmptyEdgeSetRejected) {
    SocialGraph g = SocialGraph::from_edges(3, {});
    EXPECT_THROW(modularity(g, Mapping::singletons(3)), ValidationError);
}

TEST(Louvain, SingleCliqueStaysWhole) {
    SocialGraph g = testsupport::clique(5);
    Mapping m = louvain(g, 7);
    m.validate(g.node_count());
    EXPECT_EQ(m.peer_count, 1u);
}

TEST(Louvain, SplitsTwoCliquesAtTheBridge) {
    SocialGraph g = testsupport::two_cliques_bridge();
    Mapping m = louvain(g, 3);
    m.validate(g.node_count());
    ASSERT_EQ(m.peer_count, 2u);
    for (NodeId u = 1; u < 4; ++u) EXPECT_EQ(m.peer_of[u], m.peer_of[0]);
    for (NodeId u = 5; u < 8; ++u) EXPECT_EQ(m.peer_of[u], m.peer_of[4]);
    EXPECT_NE(m.peer_of[0], m.peer_of[4]);
    EXPECT_NEAR(modularity(g, m), testsupport::best_partition_modularity(g), 1e-12);
}

TEST(Louvain, NeverBelowSingletonModularityAndPhasesMonotone) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(10, 0.3, seed);
        std::vector<double> phase_q;
        Mapping m = louvain(g, seed, &phase_q);
        m.validate(g.node_count());
        EXPECT_GE(modularity(g, m), modularity(g, Mapping::singletons(g.node_count())) - 1e-12);
        for (std::size_t i = 1; i < phase_q.size(); ++i) {
            EXPECT_GE(phase_q[i], phase_q[i - 1] - 1e-12);
        }
    }
}

TEST(RecursiveLouvain, NoOpWhenNothingExceedsCap) {
    SocialGraph g = testsupport::clique(5);
    Mapping plain = louvain(g, 11);
    Mapping rec = recursive_louvain(g, 100, 11);
    EXPECT_EQ(plain.peer_of, rec.peer_of);
}

TEST(RecursiveLouvain, RefinesParentCommunities) {
    // users never cross the parent community boundary during recursion
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(40, 0.15, seed);
        Mapping parent = louvain(g, seed);
        Mapping refined = recursive_louvain(g, 5, seed);
        refined.validate(g.node_count());
        for (NodeId u = 0; u < g.node_count(); ++u) {
            for (NodeId v = u + 1; v < g.node_count(); ++v) {
                if (refined.peer_of[u] == refined.peer_of[v]) {
                    EXPECT_EQ(parent.peer_of[u], parent.peer_of[v]);
                }
            }
        }
    }
}

TEST(RecursiveLouvain, RejectsTinyCap) {
    SocialGraph g = testsupport::clique(3);
    EXPECT_THROW(recursive_louvain(g, 1, 0), ValidationError);
}

TEST(MergeToTarget, AlreadyAtTargetIsUnchanged) {
    SocialGraph g = testsupport::random_connected_graph(10, 0.3, 5);
    Mapping m = testsupport::random_mapping(10, 2, 3);
    const std::uint32_t target = static_cast<std::uint32_t>(10 / m.peer_count);
    MergeResult r = merge_to_target(g, m, target, 0);
    EXPECT_FALSE(r.target_unreachable);
    EXPECT_EQ(r.mapping.peer_of, m.peer_of);
}

TEST(MergeToTarget, MergesForcedSmallestPair) {
    // path a-b-c-d with communities {a,b},{c},{d}: both singletons are smallest
    // and c-d are socially connected, so they merge first.
    SocialGraph g = testsupport::path_graph(4);
    Mapping m = Mapping::from_labels(std::vector<int>{0, 0, 1, 2});
    MergeResult r = merge_to_target(g, m, 2, 0);
    EXPECT_FALSE(r.target_unreachable);
    EXPECT_EQ(r.mapping.peer_count, 2u);
    EXPECT_EQ(r.mapping.peer_of[0], r.mapping.peer_of[1]);
    EXPECT_EQ(r.mapping.peer_of[2], r.mapping.peer_of[3]);
    EXPECT_NE(r.mapping.peer_of[0], r.mapping.peer_of[2]);
}

TEST(MergeToTarget, RejectsTargetBelowCurrentMean) {
    SocialGraph g = testsupport::path_graph(6);
    Mapping m = Mapping::from_labels(std::vector<int>{0, 0, 0, 1, 1, 1});
    EXPECT_THROW(merge_to_target(g, m, 2, 0), ValidationError);
}

TEST(MergeToTarget, OnlyMergesSociallyConnectedAndCountDropsByOne) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        SocialGraph g = testsupport::random_connected_graph(30, 0.12, seed);
        Mapping m = Mapping::singletons(30);
        // step one merge at a time and watch the count decrease by exactly 1
        std::uint32_t prev = m.peer_count;
        for (std::uint32_t target = 2; target <= 10; target += 4) {
            MergeResult r = merge_to_target(g, m, target, seed);
            r.mapping.validate(30);
            EXPECT_LE(r.mapping.peer_count, prev);
            // merging only socially-connected pairs starting from singletons
            // keeps every community internally connected
            for (const auto& group : r.mapping.members()) {
                if (group.size() < 2) continue;
                std::set<NodeId> in(group.begin(), group.end());
                std::set<NodeId> seen{group[0]};
                std::vector<NodeId> queue{group[0]};
                while (!queue.empty()) {
                    NodeId u = queue.back();
                    queue.pop_back();
                    for (NodeId v : g.neighbors(u)) {
                        if (in.count(v) && !seen.count(v)) {
                            seen.insert(v);
                            queue.push_back(v);
                        }
                    }
                }
                EXPECT_EQ(seen.size(), group.size()) << "community not connected";
            }
            prev = r.mapping.peer_count;
        }
    }
}

TEST(MergeToTarget, AchievedMeanWithinTenPercent) {
    SocialGraph g = testsupport::random_connected_graph(200, 0.05, 9);
    Mapping m = Mapping::singletons(200);
    for (std::uint32_t target : {5u, 10u, 25u, 50u}) {
        MergeResult r = merge_to_target(g, m, target, 0);
        ASSERT_FALSE(r.target_unreachable);
        const double mean = 200.0 / r.mapping.peer_count;
        EXPECT_GE(mean, 0.9 * target);
        EXPECT_LE(mean, 1.1 * target);
    }
}

TEST(MergeToTarget, UnreachableTargetSetsFlag) {
    // two disconnected cliques cannot merge across components
    std::vector<EdgeKey> edges;
    for (NodeId u = 0; u < 3; ++u) {
        for (NodeId v = u + 1; v < 3; ++v) {
            edges.emplace_back(u, v);
            edges.emplace_back(u + 3, v + 3);
        }
    }
    SocialGraph g = SocialGraph::from_edges(6, std::move(edges));
    Mapping m = Mapping::from_labels(std::vector<int>{0, 0, 0, 1, 1, 1});
    MergeResult r = merge_to_target(g, m, 6, 0);
    EXPECT_TRUE(r.target_unreachable);
    EXPECT_EQ(r.mapping.peer_count, 2u);
}

TEST(JaccardAssign, PicksHighestOverlapGroup) {
    // u=0 with friends {1,2,3}; group 0 = {1,2,4} scores 0.5, group 1 = {5} scores 0
    SocialGraph g = SocialGraph::from_edges(6, {{0, 1}, {0, 2}, {0, 3}, {4, 5}});
    GroupData groups;
    groups.group_members = {{1, 2, 4}, {5}};
    groups.group_external_ids = {100, 200};
    groups.user_groups = {{0, 1}, {0}, {0}, {0}, {0}, {1}};
    Mapping m = jaccard_assign(g, groups);
    m.validate(6);
    EXPECT_EQ(m.peer_of[0], m.peer_of[1]);  // user 0 joins group 0
    EXPECT_NE(m.peer_of[0], m.peer_of[5]);
}

TEST(JaccardAssign, SingleGroupUsersStayAndEmptyGroupsDrop) {
    SocialGraph g = SocialGraph::from_edges(3, {{0, 1}, {1, 2}});
    GroupData groups;
    groups.group_members = {{0, 1, 2}, {2}};
    groups.group_external_ids = {7, 9};
    // user 2 prefers group 0 (friend overlap), leaving group 1 empty -> dropped
    groups.user_groups = {{0}, {0}, {0, 1}};
    Mapping m = jaccard_assign(g, groups);
    EXPECT_EQ(m.peer_count, 1u);
}

TEST(JaccardAssign, UserWithoutGroupsRejected) {
    SocialGraph g = SocialGraph::from_edges(2, {{0, 1}});
    GroupData groups;
    groups.group_members = {{0}};
    groups.group_external_ids = {1};
    groups.user_groups = {{0}, {}};
    EXPECT_THROW(jaccard_assign(g, groups), ValidationError);
}

TEST(PartitionStats, BasicInvariants) {
    Mapping m = Mapping::from_labels(std::vector<int>{0, 0, 0, 1, 2, 2});
    PartitionStats st = partition_stats(m);
    EXPECT_EQ(st.community_count, 3u);
    EXPECT_NEAR(st.mean_size * st.community_count, 6.0, 1e-12);
    EXPECT_EQ(st.min_size, 1u);
    EXPECT_EQ(st.max_size, 3u);
    EXPECT_LE(st.min_size, st.mean_size);
    EXPECT_GE(st.max_size, st.mean_size);
}

}  // namespace
