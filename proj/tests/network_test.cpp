#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "vmine/error.hpp"
#include "vmine/network.hpp"

namespace vmine {
namespace {

using testing::graph_from_pairs;
using testing::node_name;

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no vmine::Error thrown";
  return ErrorCode::kInvalidConfig;
}

TEST(Network, SortsNodesAndNormalizesEdges) {
  std::vector<NodeRecord> nodes{{"c", {}}, {"a", {}}, {"b", {}}};
  std::vector<EdgeDeclaration> edges{{"c", "a", Direction::kUToV}, {"b", "a"}};
  const Network net = build_network(nodes, edges);
  ASSERT_EQ(net.node_count(), 3u);
  EXPECT_EQ(net.node(0).id, "a");
  EXPECT_EQ(net.node(2).id, "c");
  ASSERT_EQ(net.edge_count(), 2u);
  // c->a becomes (a, c) with the direction flipped.
  EXPECT_EQ(net.edges()[0], (Edge{0, 1, Direction::kNone}));
  EXPECT_EQ(net.edges()[1], (Edge{0, 2, Direction::kVToU}));
  EXPECT_EQ(net.degree(0), 2u);
  EXPECT_TRUE(net.has_edge(2, 0));
  EXPECT_FALSE(net.has_edge(1, 2));
}

TEST(Network, DuplicateDeclarationsCollapseKeepingFirstDirection) {
  std::vector<NodeRecord> nodes{{"a", {}}, {"b", {}}};
  std::vector<EdgeDeclaration> edges{{"a", "b"}, {"b", "a", Direction::kUToV}, {"a", "b", Direction::kUToV}};
  const Network net = build_network(nodes, edges);
  ASSERT_EQ(net.edge_count(), 1u);
  EXPECT_EQ(net.edges()[0].direction, Direction::kVToU);
}

TEST(Network, RejectsBadInputWithItemIndex) {
  std::vector<NodeRecord> nodes{{"a", {}}, {"b", {}}};
  std::vector<EdgeDeclaration> dangling{{"a", "b"}, {"a", "zz"}};
  try {
    build_network(nodes, dangling);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownEndpoint);
    EXPECT_EQ(e.item(), 1u);
  }
  std::vector<EdgeDeclaration> loop{{"a", "a"}};
  EXPECT_EQ(code_of([&] { build_network(nodes, loop); }), ErrorCode::kSelfLoop);
  std::vector<NodeRecord> dup{{"a", {}}, {"a", {}}};
  EXPECT_EQ(code_of([&] { build_network(dup, {}); }), ErrorCode::kDuplicateNodeId);
}

TEST(Network, SchemaInferenceAndMismatch) {
  std::vector<NodeRecord> nodes{{"a", {{"sex", std::string("f")}, {"year", std::int64_t{1990}}}},
                                {"b", {{"sex", std::string("m")}}}};
  const Network net = build_network(nodes, {});
  EXPECT_EQ(net.schema().at("sex"), AttributeType::kCategorical);
  EXPECT_EQ(net.schema().at("year"), AttributeType::kInteger);
  EXPECT_TRUE(std::holds_alternative<std::monostate>(net.node(1).attribute("year")));

  std::vector<NodeRecord> bad{{"a", {{"year", std::int64_t{1}}}}, {"b", {{"year", std::string("x")}}}};
  EXPECT_EQ(code_of([&] { build_network(bad, {}); }), ErrorCode::kSchemaMismatch);
}

TEST(Network, IndexLookup) {
  const Network net = testing::path3();
  EXPECT_EQ(net.index_of("n001"), 1u);
  EXPECT_FALSE(net.find("nope"));
  EXPECT_EQ(code_of([&] { net.index_of("nope"); }), ErrorCode::kUnknownNodeId);
}

TEST(Network, ComponentsMatchUnionFind) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Network net = testing::random_graph(30, 0.06, seed);
    const auto comps = connected_components(net);
    const auto label = testing::union_find_components(net);
    std::size_t covered = 0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      covered += comps[c].size();
      EXPECT_TRUE(std::is_sorted(comps[c].begin(), comps[c].end()));
      for (NodeIndex v : comps[c]) EXPECT_EQ(label[v], label[comps[c][0]]);
      if (c > 0) {
        EXPECT_GE(comps[c - 1].size(), comps[c].size());
        EXPECT_NE(label[comps[c - 1][0]], label[comps[c][0]]);
        if (comps[c - 1].size() == comps[c].size()) EXPECT_LT(comps[c - 1][0], comps[c][0]);
      }
    }
    EXPECT_EQ(covered, net.node_count());
  }
}

TEST(Network, InducedSubgraphKeepsInternalEdgesOnly) {
  const Network net = testing::two_triangles_bridge();
  const std::vector<NodeIndex> keep{3, 2, 4, 2};
  const Network sub = induced_subgraph(net, keep);
  ASSERT_EQ(sub.node_count(), 3u);
  EXPECT_EQ(sub.node(0).id, "n002");
  EXPECT_EQ(sub.edge_count(), 2u);  // 2-3 bridge and 3-4
  const std::vector<std::string> ids{"n000", "n001"};
  EXPECT_EQ(induced_subgraph_by_id(net, ids).edge_count(), 1u);
  const std::vector<NodeIndex> bad{99};
  EXPECT_EQ(code_of([&] { induced_subgraph(net, bad); }), ErrorCode::kUnknownNodeId);
}

TEST(Network, StructureHashIgnoresDeclarationOrder) {
  const Network a = graph_from_pairs(4, {{0, 1}, {2, 3}, {1, 2}});
  const Network b = graph_from_pairs(4, {{3, 2}, {1, 0}, {2, 1}});
  EXPECT_EQ(a.structure_hash(), b.structure_hash());
  EXPECT_NE(a.structure_hash(), graph_from_pairs(4, {{0, 1}, {2, 3}}).structure_hash());
  EXPECT_EQ(build_network({a.nodes().begin(), a.nodes().end()}, edge_declarations(a)), a);
}

TEST(Network, DegreeSequence) {
  EXPECT_EQ(degree_sequence(testing::path3()), (std::vector<std::size_t>{1, 2, 1}));
}

}  // namespace
}  // namespace vmine
