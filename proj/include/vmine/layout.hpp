#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vmine/clustering.hpp"
#include "vmine/stats.hpp"

namespace vmine {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct BoundingBox {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

  bool contains(const Point& p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  double area() const { return (x1 - x0) * (y1 - y0); }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct LayoutOptions {
  std::size_t iterations = 500;
  double width = 1000.0;
  double height = 1000.0;
  /// Optimal distance constant: k = C * sqrt(area / |V|).
  double c = 1.0;
  double min_radius = 4.0;
  double max_radius = 40.0;
  double max_thickness = 12.0;
  /// Warm start, one entry per meta-node; nullopt entries are seeded randomly.
  std::vector<std::optional<Point>> initial;
};

struct LayoutResult {
  std::vector<Point> positions;
  std::vector<double> radius;
  /// Aligned with ClusterGraph::edges.
  std::vector<double> thickness;
  BoundingBox box;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const LayoutResult&, const LayoutResult&) = default;
};

/// Disk radius with area-proportional scaling: r_min + s*sqrt(size), the
/// largest disk getting max_radius.
double disk_radius(std::size_t size, std::size_t largest, double min_radius, double max_radius);
/// 1 + 2*log2(1 + weight), capped.
double edge_thickness(std::size_t weight, double cap);

/// Fruchterman-Reingold placement of the metagraph. Connected components are
/// laid out separately in the cells of a grid covering the frame. Throws
/// EmptyClusterGraph.
LayoutResult fr_layout(const ClusterGraph& cg, std::uint64_t seed, const LayoutOptions& options = {});

enum class Shape { kCircle, kSquare };

struct NodeStyle {
  double darkness = 0.0;  // 0 = lightest, 1 = darkest
  Shape shape = Shape::kCircle;
  std::optional<double> p_value;
  std::optional<double> residual;
  bool atypical = false;
  bool low_count = false;
};

struct StyledLayout {
  LayoutResult layout;
  std::optional<std::string> category;
  double alpha = 0.05;
  std::vector<NodeStyle> styles;
};

/// Without a category: darkness = 1 - p and atypical = p < alpha. With one:
/// shape follows the residual sign (0 draws a circle) and darkness grows
/// with |residual|. Throws UnknownCluster, UnknownCategory.
StyledLayout style_overlay(const LayoutResult& layout, const TestOverlay& overlay,
                           const std::optional<std::string>& category, double alpha);

/// Plain styling (no overlay): every node lightest circle.
StyledLayout unstyled(const LayoutResult& layout);

}  // namespace vmine
