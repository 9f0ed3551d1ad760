#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vmine/clustering.hpp"
#include "vmine/error.hpp"

namespace vmine {
namespace {

using testing::brute_force_modularity;

std::vector<ClusterId> random_labels(std::size_t n, ClusterId k, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ClusterId> out(n);
  for (auto& c : out) c = static_cast<ClusterId>(rng.below(k));
  return out;
}

TEST(Partition, CanonicalNumberingFollowsSmallestMember) {
  const Partition p = canonical_partition({7, 3, 7, 9, 3});
  EXPECT_EQ(p.assignment, (std::vector<ClusterId>{0, 1, 0, 2, 1}));
  EXPECT_EQ(p.k, 3u);
  EXPECT_EQ(p.sizes(), (std::vector<std::size_t>{2, 2, 1}));
  EXPECT_EQ(p.members()[1], (std::vector<NodeIndex>{1, 4}));
  EXPECT_EQ(p.fingerprint(), canonical_partition({0, 5, 0, 1, 5}).fingerprint());
  EXPECT_NE(p.fingerprint(), canonical_partition({0, 0, 0, 1, 1}).fingerprint());
}

TEST(Modularity, ToyValues) {
  const Network net = testing::two_triangles_bridge();
  EXPECT_NEAR(modularity(net, make_partition(net, {0, 0, 0, 1, 1, 1})), 5.0 / 14.0, 1e-15);
  EXPECT_NEAR(modularity(net, make_partition(net, {0, 0, 0, 0, 0, 0})), 0.0, 1e-15);
  // Two disjoint triangles split perfectly: 2 * (3/6 - 1/4).
  const Network tt = testing::two_triangles();
  EXPECT_NEAR(modularity(tt, make_partition(tt, {0, 0, 0, 1, 1, 1})), 0.5, 1e-15);
}

TEST(Modularity, MatchesDenseDoubleSum) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Network net = testing::random_graph(12, 0.3, seed);
    if (net.edge_count() == 0) continue;
    const auto labels = random_labels(12, 4, seed + 1000);
    const Partition p = make_partition(net, labels);
    EXPECT_NEAR(modularity(net, p), brute_force_modularity(net, labels), 1e-12);
    EXPECT_NEAR(modularity(build_cluster_graph(net, p), net.edge_count()), p.modularity, 1e-12);
  }
}

TEST(Modularity, EmptyGraphThrows) {
  const Network net = testing::graph_from_pairs(3, {});
  try {
    modularity(net, canonical_partition({0, 1, 2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyGraph);
  }
  EXPECT_THROW(cluster(net, 1), Error);
}

TEST(ClusterGraph, AggregatesEdgesAndDegrees) {
  const Network net = testing::clique_chain3();
  const Partition p = make_partition(net, {0, 0, 0, 1, 1, 1, 2, 2, 2});
  const ClusterGraph cg = build_cluster_graph(net, p);
  EXPECT_EQ(cg.sizes, (std::vector<std::size_t>{3, 3, 3}));
  EXPECT_EQ(cg.internal_edges, (std::vector<std::size_t>{3, 3, 3}));
  EXPECT_EQ(cg.total_degree, (std::vector<std::size_t>{7, 8, 7}));
  ASSERT_EQ(cg.edges.size(), 2u);
  EXPECT_EQ(cg.weight(1, 0), 1u);
  EXPECT_EQ(cg.weight(0, 2), 0u);
}

TEST(DeltaQ, EqualsRecomputedDifference) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Network net = testing::random_graph(20, 0.2, seed);
    if (net.edge_count() == 0) continue;
    const Partition p = make_partition(net, random_labels(20, 5, seed + 7));
    const ClusterGraph cg = build_cluster_graph(net, p);
    for (ClusterId a = 0; a < p.k; ++a) {
      for (ClusterId b = a + 1; b < p.k; ++b) {
        auto merged = p.assignment;
        for (auto& c : merged) c = c == b ? a : c;
        const double expect = brute_force_modularity(net, merged) - brute_force_modularity(net, p.assignment);
        EXPECT_NEAR(delta_q_merge(cg, net.edge_count(), a, b), expect, 1e-12);
      }
    }
  }
}

TEST(DeltaQ, RejectsSameOrUnknownCluster) {
  const Network net = testing::two_triangles_bridge();
  const ClusterGraph cg = build_cluster_graph(net, make_partition(net, {0, 0, 0, 1, 1, 1}));
  EXPECT_THROW(delta_q_merge(cg, 7, 1, 1), Error);
  EXPECT_THROW(delta_q_merge(cg, 7, 0, 5), Error);
}

TEST(Cluster, ReachesExhaustiveOptimumOnToys) {
  for (const Network& net : {testing::two_triangles_bridge(), testing::clique_chain3()}) {
    const auto best = testing::exhaustive_max_modularity(net);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      EXPECT_NEAR(cluster(net, seed).modularity, best.q, 1e-12);
    }
  }
  const Partition p = cluster(testing::two_triangles_bridge(), 3);
  EXPECT_EQ(p.assignment, (std::vector<ClusterId>{0, 0, 0, 1, 1, 1}));
}

TEST(Cluster, CliqueStaysWhole) {
  EXPECT_EQ(cluster(testing::clique(6), 0).k, 1u);
  EXPECT_EQ(cluster(testing::triangle(), 5).k, 1u);
}

TEST(Cluster, DeterministicPerSeed) {
  const Network net = testing::random_graph(60, 0.08, 4);
  EXPECT_EQ(cluster(net, 11), cluster(net, 11));
}

// No adjacent merge and no single-node move increases Q at the result.
TEST(Cluster, ResultIsLocalOptimum) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Network net = testing::random_graph(25, 0.15, seed);
    if (net.edge_count() == 0) continue;
    const Partition p = cluster(net, seed);
    EXPECT_NEAR(p.modularity, brute_force_modularity(net, p.assignment), 1e-12);
    const ClusterGraph cg = build_cluster_graph(net, p);
    for (const auto& e : cg.edges) EXPECT_LE(delta_q_merge(cg, net.edge_count(), e.a, e.b), 1e-12);
    for (NodeIndex v = 0; v < net.node_count(); ++v) {
      std::set<ClusterId> options;
      for (NodeIndex u : net.neighbors(v)) options.insert(p.assignment[u]);
      for (ClusterId c : options) {
        auto moved = p.assignment;
        moved[v] = c;
        EXPECT_LE(brute_force_modularity(net, moved), p.modularity + 1e-12);
      }
    }
  }
}

TEST(Cluster, IsolatedNodesStaySingletons) {
  const Network net = testing::graph_from_pairs(5, {{0, 1}, {1, 2}, {0, 2}});
  const Partition p = cluster(net, 0);
  EXPECT_EQ(p.k, 3u);
  EXPECT_EQ(p.sizes(), (std::vector<std::size_t>{3, 1, 1}));
}

TEST(Coarsen, MergesBestPairUntilTarget) {
  const Network net = testing::clique_chain3();
  const Partition p = make_partition(net, {0, 0, 0, 1, 1, 1, 2, 2, 2});
  const SteppedPartition s = coarsen(net, p, 2);
  EXPECT_EQ(s.partition.k, 2u);
  EXPECT_EQ(s.step.kind, StepKind::kCoarsen);
  EXPECT_EQ(s.step.parent, p.fingerprint());
  EXPECT_EQ(s.step.child, s.partition.fingerprint());
  // 0+1 and 1+2 tie on dQ; the smaller pair wins.
  EXPECT_EQ(s.partition.assignment, (std::vector<ClusterId>{0, 0, 0, 0, 0, 0, 1, 1, 1}));
  EXPECT_NEAR(s.partition.modularity, brute_force_modularity(net, s.partition.assignment), 1e-12);

  EXPECT_EQ(coarsen(net, p, 1).partition.k, 1u);
}

TEST(Coarsen, PicksMaximumGainPair) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Network net = testing::random_graph(18, 0.2, seed);
    if (net.edge_count() == 0) continue;
    const Partition p = make_partition(net, random_labels(18, 6, seed));
    if (p.k < 2) continue;
    const Partition c = coarsen(net, p, p.k - 1).partition;
    double best = -1e9;
    const ClusterGraph cg = build_cluster_graph(net, p);
    for (const auto& e : cg.edges) best = std::max(best, delta_q_merge(cg, net.edge_count(), e.a, e.b));
    if (cg.edges.empty()) continue;
    EXPECT_NEAR(c.modularity - p.modularity, best, 1e-12);
  }
}

TEST(Coarsen, BadTarget) {
  const Network net = testing::two_triangles_bridge();
  const Partition p = make_partition(net, {0, 0, 0, 1, 1, 1});
  for (std::size_t k : {0, 2, 3}) {
    try {
      coarsen(net, p, k);
      FAIL() << k;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kBadTarget);
    }
  }
}

TEST(Refine, SplitsOnlyTargets) {
  const Network net = testing::clique_chain3();
  const Partition p = make_partition(net, {0, 0, 0, 0, 0, 0, 1, 1, 1});
  const SteppedPartition s = refine(net, p, {0}, 1);
  EXPECT_EQ(s.partition.assignment, (std::vector<ClusterId>{0, 0, 0, 1, 1, 1, 2, 2, 2}));
  EXPECT_EQ(s.step.kind, StepKind::kRefine);
  EXPECT_EQ(s.step.affected, (std::vector<ClusterId>{0}));
  EXPECT_EQ(refine(net, p, {}, 1).partition, p);
  EXPECT_THROW(refine(net, p, {2}, 1), Error);
}

TEST(MergeIntoGroups, LabelsAndErrors) {
  const Network net = testing::clique_chain3();
  const Partition p = make_partition(net, {0, 0, 0, 1, 1, 1, 2, 2, 2});
  std::vector<std::string> labels;
  const Partition g = merge_into_groups(net, p, {{0, "x"}, {1, "y"}, {2, "x"}}, &labels);
  EXPECT_EQ(g.assignment, (std::vector<ClusterId>{0, 0, 0, 1, 1, 1, 0, 0, 0}));
  EXPECT_EQ(labels, (std::vector<std::string>{"x", "y"}));
  try {
    merge_into_groups(net, p, {{0, "x"}, {1, "y"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnlabeledCluster);
  }
}

}  // namespace
}  // namespace vmine
