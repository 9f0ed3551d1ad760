#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "fixtures.hpp"
#include "vmine/error.hpp"
#include "vmine/layout.hpp"

namespace vmine {
namespace {

ClusterGraph path_metagraph(std::size_t n) {
  ClusterGraph cg;
  cg.sizes.assign(n, 3);
  cg.internal_edges.assign(n, 3);
  cg.total_degree.assign(n, 8);
  for (ClusterId i = 0; i + 1 < n; ++i) cg.edges.push_back({i, i + 1, 1});
  return cg;
}

bool bitwise_equal(const std::vector<Point>& a, const std::vector<Point>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(Point)) == 0;
}

TEST(Layout, BitwiseReproducible) {
  const Network net = testing::random_graph(80, 0.05, 2);
  const ClusterGraph cg = build_cluster_graph(net, cluster(net, 2));
  const LayoutResult a = fr_layout(cg, 42);
  const LayoutResult b = fr_layout(cg, 42);
  EXPECT_TRUE(bitwise_equal(a.positions, b.positions));
  EXPECT_EQ(a, b);
  EXPECT_FALSE(bitwise_equal(a.positions, fr_layout(cg, 43).positions));
}

TEST(Layout, StaysInFrameWithScaledGlyphs) {
  const Network net = testing::random_graph(80, 0.05, 3);
  const ClusterGraph cg = build_cluster_graph(net, cluster(net, 3));
  LayoutOptions options;
  options.width = 400;
  options.height = 300;
  const LayoutResult l = fr_layout(cg, 1, options);
  EXPECT_EQ(l.box, (BoundingBox{0, 0, 400, 300}));
  std::size_t largest = 0;
  for (std::size_t s : cg.sizes) largest = std::max(largest, s);
  for (ClusterId c = 0; c < cg.cluster_count(); ++c) {
    EXPECT_TRUE(l.box.contains(l.positions[c]));
    EXPECT_GE(l.radius[c], 4.0);
    EXPECT_LE(l.radius[c], 40.0);
    if (cg.sizes[c] == largest) EXPECT_DOUBLE_EQ(l.radius[c], 40.0);
  }
  ASSERT_EQ(l.thickness.size(), cg.edges.size());
  for (std::size_t i = 0; i < cg.edges.size(); ++i) {
    EXPECT_DOUBLE_EQ(l.thickness[i], std::min(12.0, 1.0 + 2.0 * std::log2(1.0 + cg.edges[i].weight)));
  }
}

TEST(Layout, GlyphFormulas) {
  EXPECT_DOUBLE_EQ(disk_radius(100, 100, 4, 40), 40.0);
  EXPECT_DOUBLE_EQ(disk_radius(25, 100, 4, 40), 4.0 + 36.0 * 0.5);
  EXPECT_DOUBLE_EQ(edge_thickness(1, 12), 3.0);
  EXPECT_DOUBLE_EQ(edge_thickness(3, 12), 5.0);
  EXPECT_DOUBLE_EQ(edge_thickness(1000, 12), 12.0);
}

TEST(Layout, ComponentsGetSeparateCells) {
  ClusterGraph cg = path_metagraph(4);
  cg.edges = {{0, 1, 1}, {2, 3, 1}};
  const LayoutResult l = fr_layout(cg, 5);
  // Two components: left and right halves of the frame.
  EXPECT_LE(l.positions[0].x, 500.0);
  EXPECT_LE(l.positions[1].x, 500.0);
  EXPECT_GE(l.positions[2].x, 500.0);
  EXPECT_GE(l.positions[3].x, 500.0);
}

TEST(Layout, SingleNodeCentered) {
  const LayoutResult l = fr_layout(path_metagraph(1), 9);
  EXPECT_EQ(l.positions[0], (Point{500.0, 500.0}));
}

TEST(Layout, EmptyMetagraphThrows) {
  try {
    fr_layout(ClusterGraph{}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyClusterGraph);
  }
}

// The middle of a three-node path ends up between the ends along the
// principal axis of the drawing.
TEST(Layout, PathKeepsOrderOnPrincipalAxis) {
  const ClusterGraph cg = path_metagraph(3);
  int ordered = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto p = fr_layout(cg, seed).positions;
    const double mx = (p[0].x + p[1].x + p[2].x) / 3, my = (p[0].y + p[1].y + p[2].y) / 3;
    double sxx = 0, syy = 0, sxy = 0;
    for (const auto& q : p) {
      sxx += (q.x - mx) * (q.x - mx);
      syy += (q.y - my) * (q.y - my);
      sxy += (q.x - mx) * (q.y - my);
    }
    const double angle = 0.5 * std::atan2(2 * sxy, sxx - syy);
    auto proj = [&](const Point& q) { return (q.x - mx) * std::cos(angle) + (q.y - my) * std::sin(angle); };
    const double a = proj(p[0]), b = proj(p[1]), c = proj(p[2]);
    ordered += (a < b && b < c) || (c < b && b < a);
  }
  EXPECT_GE(ordered, 95);
}

TEST(Layout, WarmStartIsDeterministic) {
  const ClusterGraph cg = path_metagraph(5);
  LayoutOptions options;
  options.iterations = 50;
  options.initial = {Point{100, 100}, std::nullopt, Point{500, 500}, std::nullopt, Point{900, 900}};
  const LayoutResult a = fr_layout(cg, 3, options);
  EXPECT_EQ(a, fr_layout(cg, 3, options));
  EXPECT_NE(a.positions, fr_layout(cg, 3, LayoutOptions{.iterations = 50}).positions);
}

TestOverlay sample_overlay() {
  TestOverlay o;
  o.attribute = "kind";
  o.global.categories = {"x", "y"};
  o.global.counts = {5, 5};
  o.global.total = 10;
  o.clusters = {{0, 5, 5.0, 1, 0.01, {{"x", 1.5}, {"y", -1.5}}, false},
                {1, 5, 0.2, 1, 0.6, {{"x", -0.2}, {"y", 0.0}}, false}};
  return o;
}

TEST(Style, PValueShading) {
  const LayoutResult l = fr_layout(path_metagraph(2), 1);
  const StyledLayout s = style_overlay(l, sample_overlay(), std::nullopt, 0.05);
  EXPECT_DOUBLE_EQ(s.styles[0].darkness, 0.99);
  EXPECT_TRUE(s.styles[0].atypical);
  EXPECT_FALSE(s.styles[1].atypical);
  EXPECT_EQ(s.styles[0].shape, Shape::kCircle);
  EXPECT_EQ(s.styles[0].p_value, 0.01);
}

TEST(Style, ResidualShapes) {
  const LayoutResult l = fr_layout(path_metagraph(2), 1);
  const StyledLayout x = style_overlay(l, sample_overlay(), "x", 0.05);
  EXPECT_EQ(x.styles[0].shape, Shape::kCircle);
  EXPECT_EQ(x.styles[1].shape, Shape::kSquare);
  EXPECT_DOUBLE_EQ(x.styles[0].darkness, 1.5 / 2.5);
  const StyledLayout y = style_overlay(l, sample_overlay(), "y", 0.05);
  EXPECT_EQ(y.styles[0].shape, Shape::kSquare);
  EXPECT_EQ(y.styles[1].shape, Shape::kCircle);  // zero residual draws a circle
  EXPECT_EQ(x.layout, l);  // restyling never moves anything
}

TEST(Style, Errors) {
  const LayoutResult l = fr_layout(path_metagraph(1), 1);
  EXPECT_THROW(style_overlay(l, sample_overlay(), std::nullopt, 0.05), Error);  // cluster 1 missing
  const LayoutResult two = fr_layout(path_metagraph(2), 1);
  try {
    style_overlay(two, sample_overlay(), "z", 0.05);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownCategory);
  }
  EXPECT_THROW(style_overlay(two, sample_overlay(), std::nullopt, 1.0), Error);
}

}  // namespace
}  // namespace vmine
