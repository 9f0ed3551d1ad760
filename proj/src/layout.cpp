#include "vmine/layout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vmine/error.hpp"
#include "vmine/random.hpp"

namespace vmine {
namespace {

std::vector<std::vector<ClusterId>> metagraph_components(const ClusterGraph& cg) {
  const std::size_t n = cg.cluster_count();
  std::vector<ClusterId> parent(n);
  std::iota(parent.begin(), parent.end(), ClusterId{0});
  auto find = [&](ClusterId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : cg.edges) {
    ClusterId a = find(e.a), b = find(e.b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<ClusterId>> by_root(n);
  for (ClusterId c = 0; c < n; ++c) by_root[find(c)].push_back(c);
  std::vector<std::vector<ClusterId>> comps;
  for (auto& c : by_root) {
    if (!c.empty()) comps.push_back(std::move(c));
  }
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return comps;
}

Point clamp_to(const BoundingBox& box, Point p) {
  return {std::clamp(p.x, box.x0, box.x1), std::clamp(p.y, box.y0, box.y1)};
}

void run_fruchterman_reingold(const ClusterGraph& cg, const std::vector<ClusterId>& nodes,
                              const BoundingBox& cell, std::size_t iterations, double c,
                              std::vector<Point>& pos) {
  const double area = cell.area();
  const double k = c * std::sqrt(area / static_cast<double>(nodes.size()));
  const double k2 = k * k;
  const double t0 = 0.1 * std::sqrt(area);
  constexpr double kMinDistance = 1e-9;

  std::vector<std::pair<std::size_t, std::size_t>> links;
  std::vector<std::size_t> local(cg.cluster_count(), 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = i;
  std::vector<bool> member(cg.cluster_count(), false);
  for (ClusterId v : nodes) member[v] = true;
  for (const auto& e : cg.edges) {
    if (member[e.a]) links.emplace_back(local[e.a], local[e.b]);
  }

  std::vector<Point> p(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) p[i] = pos[nodes[i]];
  std::vector<Point> disp(nodes.size());

  for (std::size_t it = 0; it < iterations; ++it) {
    const double t =
        t0 * (1.0 - static_cast<double>(it) / static_cast<double>(iterations));
    std::fill(disp.begin(), disp.end(), Point{});
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = i + 1; j < p.size(); ++j) {
        double dx = p[i].x - p[j].x;
        double dy = p[i].y - p[j].y;
        double d = std::hypot(dx, dy);
        if (d < kMinDistance) {
          dx = kMinDistance;
          dy = 0.0;
          d = kMinDistance;
        }
        const double f = k2 / d;
        disp[i].x += dx / d * f;
        disp[i].y += dy / d * f;
        disp[j].x -= dx / d * f;
        disp[j].y -= dy / d * f;
      }
    }
    for (const auto& [i, j] : links) {
      const double dx = p[i].x - p[j].x;
      const double dy = p[i].y - p[j].y;
      const double d = std::hypot(dx, dy);
      if (d < kMinDistance) continue;
      const double f = d * d / k;
      disp[i].x -= dx / d * f;
      disp[i].y -= dy / d * f;
      disp[j].x += dx / d * f;
      disp[j].y += dy / d * f;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double len = std::hypot(disp[i].x, disp[i].y);
      if (!(len > 0.0) || !std::isfinite(len)) continue;
      const double step = std::min(len, t);
      p[i] = clamp_to(cell, {p[i].x + disp[i].x / len * step, p[i].y + disp[i].y / len * step});
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = p[i];
}

}  // namespace

double disk_radius(std::size_t size, std::size_t largest, double min_radius, double max_radius) {
  if (largest == 0) return min_radius;
  const double scale = (max_radius - min_radius) / std::sqrt(static_cast<double>(largest));
  return min_radius + scale * std::sqrt(static_cast<double>(size));
}

double edge_thickness(std::size_t weight, double cap) {
  return std::min(cap, 1.0 + 2.0 * std::log2(1.0 + static_cast<double>(weight)));
}

LayoutResult fr_layout(const ClusterGraph& cg, std::uint64_t seed, const LayoutOptions& options) {
  const std::size_t n = cg.cluster_count();
  if (n == 0) throw Error(ErrorCode::kEmptyClusterGraph, "cannot lay out an empty metagraph");
  if (options.iterations < 1) {
    throw Error(ErrorCode::kInvalidConfig, "layout needs at least one iteration", "iterations");
  }
  LayoutResult out;
  out.seed = seed;
  out.iterations = options.iterations;
  out.box = {0.0, 0.0, options.width, options.height};

  const auto comps = metagraph_components(cg);
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(comps.size()))));
  const std::size_t rows = (comps.size() + cols - 1) / cols;
  const double cw = options.width / static_cast<double>(cols);
  const double ch = options.height / static_cast<double>(rows);

  Rng rng(seed);
  out.positions.assign(n, Point{});
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const double x0 = static_cast<double>(ci % cols) * cw;
    const double y0 = static_cast<double>(ci / cols) * ch;
    const BoundingBox cell{x0, y0, x0 + cw, y0 + ch};
    const auto& nodes = comps[ci];
    if (nodes.size() == 1) {
      out.positions[nodes[0]] = {x0 + cw / 2.0, y0 + ch / 2.0};
      continue;
    }
    for (ClusterId v : nodes) {
      const double rx = rng.unit();
      const double ry = rng.unit();
      if (v < options.initial.size() && options.initial[v]) {
        out.positions[v] = clamp_to(cell, *options.initial[v]);
      } else {
        out.positions[v] = {x0 + rx * cw, y0 + ry * ch};
      }
    }
    const double jitter = 1e-4 * std::sqrt(cell.area());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        Point& a = out.positions[nodes[i]];
        const Point& b = out.positions[nodes[j]];
        if (std::hypot(a.x - b.x, a.y - b.y) < jitter) {
          const double angle = 2.0 * 3.14159265358979323846 * rng.unit();
          a = clamp_to(cell, {a.x + jitter * std::cos(angle), a.y + jitter * std::sin(angle)});
        }
      }
    }
    run_fruchterman_reingold(cg, nodes, cell, options.iterations, options.c, out.positions);
  }

  const std::size_t largest = *std::max_element(cg.sizes.begin(), cg.sizes.end());
  out.radius.reserve(n);
  for (std::size_t s : cg.sizes) {
    out.radius.push_back(disk_radius(s, largest, options.min_radius, options.max_radius));
  }
  out.thickness.reserve(cg.edges.size());
  for (const auto& e : cg.edges) out.thickness.push_back(edge_thickness(e.weight, options.max_thickness));
  return out;
}

StyledLayout unstyled(const LayoutResult& layout) {
  StyledLayout s;
  s.layout = layout;
  s.styles.assign(layout.positions.size(), NodeStyle{});
  return s;
}

StyledLayout style_overlay(const LayoutResult& layout, const TestOverlay& overlay,
                           const std::optional<std::string>& category, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "alpha must lie in (0, 1)", "alpha");
  }
  if (category && !std::binary_search(overlay.global.categories.begin(),
                                      overlay.global.categories.end(), *category)) {
    throw Error(ErrorCode::kUnknownCategory, "category '" + *category + "' not in overlay",
                *category);
  }
  StyledLayout s = unstyled(layout);
  s.category = category;
  s.alpha = alpha;
  for (const auto& rec : overlay.clusters) {
    if (rec.cluster >= s.styles.size()) {
      throw Error(ErrorCode::kUnknownCluster, "overlay cluster missing from layout",
                  std::to_string(rec.cluster));
    }
    NodeStyle& st = s.styles[rec.cluster];
    st.p_value = rec.p_value;
    st.atypical = rec.p_value < alpha;
    st.low_count = rec.low_count;
    if (!category) {
      st.darkness = 1.0 - rec.p_value;
      continue;
    }
    auto it = rec.residuals.find(*category);
    if (it == rec.residuals.end()) continue;
    const double r = it->second;
    st.residual = r;
    st.shape = r >= 0.0 ? Shape::kCircle : Shape::kSquare;
    st.darkness = std::abs(r) / (1.0 + std::abs(r));
  }
  return s;
}

}  // namespace vmine
