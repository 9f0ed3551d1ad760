#include "vmine/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include "vmine/error.hpp"

namespace vmine {
namespace {

void require_categorical(const Network& net, const std::string& attribute) {
  auto it = net.schema().find(attribute);
  if (it == net.schema().end()) {
    throw Error(ErrorCode::kUnknownAttribute, "unknown attribute '" + attribute + "'", attribute);
  }
  if (it->second != AttributeType::kCategorical) {
    throw Error(ErrorCode::kUnknownAttribute, "attribute '" + attribute + "' is not categorical",
                attribute);
  }
}

void require_integer(const Network& net, const std::string& attribute) {
  auto it = net.schema().find(attribute);
  if (it == net.schema().end()) {
    throw Error(ErrorCode::kUnknownAttribute, "unknown attribute '" + attribute + "'", attribute);
  }
  if (it->second != AttributeType::kInteger) {
    throw Error(ErrorCode::kNotIntegerAttribute, "attribute '" + attribute + "' is not integer",
                attribute);
  }
}

const std::string* category_of(const NodeRecord& r, const std::string& attribute) {
  return std::get_if<std::string>(&r.attribute(attribute));
}

void check_labels(const Partition& p, const std::map<ClusterId, std::string>& groups) {
  for (ClusterId c = 0; c < p.k; ++c) {
    if (!groups.count(c)) {
      throw Error(ErrorCode::kUnlabeledCluster, "cluster has no group label", std::to_string(c));
    }
  }
}

void finish_cell(GeodesicCell& cell) {
  if (cell.pairs > 0) {
    cell.mean = static_cast<double>(cell.total_distance) / static_cast<double>(cell.pairs);
  }
}

YearlyTable tabulate_years(
    const Network& net, const std::vector<NodeIndex>& scope, const std::string& year_attribute,
    const YearFilter& filter,
    const std::function<const std::string*(NodeIndex)>& class_of) {
  std::vector<std::pair<std::int64_t, const std::string*>> entries;
  for (NodeIndex v : scope) {
    const auto* year = std::get_if<std::int64_t>(&net.node(v).attribute(year_attribute));
    const std::string* cls = class_of(v);
    if (!year || !cls) continue;
    if (filter.min_year && *year < *filter.min_year) continue;
    if (filter.max_year && *year > *filter.max_year) continue;
    entries.emplace_back(*year, cls);
  }
  if (filter.drop_last_year && !entries.empty()) {
    const std::int64_t last =
        std::max_element(entries.begin(), entries.end())->first;
    std::erase_if(entries, [last](const auto& e) { return e.first == last; });
  }
  YearlyTable table;
  table.year_attribute = year_attribute;
  std::set<std::string> classes;
  std::map<std::int64_t, YearlyRow> rows;
  for (const auto& [year, cls] : entries) {
    classes.insert(*cls);
    YearlyRow& row = rows[year];
    row.year = year;
    ++row.total;
    ++row.counts[*cls];
  }
  table.classes.assign(classes.begin(), classes.end());
  for (auto& [year, row] : rows) table.rows.push_back(std::move(row));
  return table;
}

}  // namespace

std::uint64_t CategoricalDistribution::count(const std::string& category) const {
  auto it = std::lower_bound(categories.begin(), categories.end(), category);
  if (it == categories.end() || *it != category) return 0;
  return counts[static_cast<std::size_t>(it - categories.begin())];
}

std::vector<NodeIndex> all_nodes(const Network& net) {
  std::vector<NodeIndex> out(net.node_count());
  std::iota(out.begin(), out.end(), NodeIndex{0});
  return out;
}

CategoricalDistribution attribute_distribution(const Network& net,
                                               const std::vector<NodeIndex>& scope,
                                               const std::string& attribute) {
  require_categorical(net, attribute);
  std::map<std::string, std::uint64_t> counts;
  for (NodeIndex v : scope) {
    if (const auto* c = category_of(net.node(v), attribute)) ++counts[*c];
  }
  CategoricalDistribution d;
  d.attribute = attribute;
  for (const auto& [cat, n] : counts) {
    d.categories.push_back(cat);
    d.counts.push_back(n);
    d.total += n;
  }
  return d;
}

double regularized_gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
  constexpr double kEps = 1e-16;
  constexpr int kMaxIter = 10000;
  if (x < a + 1.0) {
    // Series for the lower function P(a, x).
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int i = 0; i < kMaxIter; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return std::clamp(1.0 - sum * std::exp(log_prefactor), 0.0, 1.0);
  }
  // Continued fraction for Q(a, x), modified Lentz.
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::clamp(std::exp(log_prefactor) * h, 0.0, 1.0);
}

double chi_squared_upper_tail(double x, int df) {
  if (df < 1) throw Error(ErrorCode::kInvalidConfig, "degrees of freedom must be >= 1", "df");
  if (!(x > 0.0)) return 1.0;
  return regularized_gamma_q(0.5 * df, 0.5 * x);
}

TestOverlay chi_squared_overlay(const Network& net, const Partition& p,
                                const std::string& attribute, const OverlayOptions& options) {
  TestOverlay overlay;
  overlay.attribute = attribute;
  overlay.global = attribute_distribution(net, all_nodes(net), attribute);
  const auto& cats = overlay.global.categories;
  if (cats.size() < 2) {
    throw Error(ErrorCode::kDegenerateGlobal,
                "attribute '" + attribute + "' takes fewer than two values in scope", attribute);
  }
  std::vector<std::vector<std::uint64_t>> observed(p.k, std::vector<std::uint64_t>(cats.size(), 0));
  for (NodeIndex v = 0; v < p.assignment.size(); ++v) {
    const auto* c = category_of(net.node(v), attribute);
    if (!c) continue;
    const auto idx = std::lower_bound(cats.begin(), cats.end(), *c) - cats.begin();
    ++observed[p.assignment[v]][static_cast<std::size_t>(idx)];
  }

  for (ClusterId c = 0; c < p.k; ++c) {
    ClusterTest t;
    t.cluster = c;
    const auto& obs = observed[c];
    t.n = std::accumulate(obs.begin(), obs.end(), std::uint64_t{0});
    std::vector<double> reference(cats.size());
    double reference_total = 0.0;
    for (std::size_t k = 0; k < cats.size(); ++k) {
      std::uint64_t r = overlay.global.counts[k];
      if (options.exclude_self) r -= obs[k];
      reference[k] = static_cast<double>(r);
      reference_total += reference[k];
    }
    int positive = 0;
    for (double r : reference) positive += r > 0.0 ? 1 : 0;
    t.df = positive - 1;
    if (t.n > 0 && reference_total > 0.0) {
      const double n = static_cast<double>(t.n);
      for (std::size_t k = 0; k < cats.size(); ++k) {
        const double expected = n * reference[k] / reference_total;
        if (!(expected > 0.0)) continue;
        const double diff = static_cast<double>(obs[k]) - expected;
        t.statistic += diff * diff / expected;
        t.residuals[cats[k]] = diff / std::sqrt(expected);
        if (expected < 5.0) t.low_count = true;
      }
      t.p_value = t.df >= 1 ? chi_squared_upper_tail(t.statistic, t.df) : 1.0;
    }
    overlay.clusters.push_back(std::move(t));
  }
  return overlay;
}

std::vector<int> bfs_distances(const Network& net, NodeIndex source,
                               const std::vector<bool>* allowed) {
  std::vector<int> dist(net.node_count(), -1);
  if (allowed && !(*allowed)[source]) return dist;
  std::vector<NodeIndex> frontier{source};
  dist[source] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const NodeIndex x = frontier[head];
    for (NodeIndex y : net.neighbors(x)) {
      if (dist[y] >= 0 || (allowed && !(*allowed)[y])) continue;
      dist[y] = dist[x] + 1;
      frontier.push_back(y);
    }
  }
  return dist;
}

GeodesicTable geodesic_table_by_attribute(const Network& net, const std::vector<NodeIndex>& scope,
                                          const std::string& attribute) {
  const CategoricalDistribution dist = attribute_distribution(net, scope, attribute);
  GeodesicTable table;
  table.labels = dist.categories;
  const std::size_t L = table.labels.size();
  table.cells.assign(L, std::vector<GeodesicCell>(L));

  std::vector<NodeIndex> nodes(scope);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<bool> allowed(net.node_count(), false);
  std::vector<int> label(net.node_count(), -1);
  for (NodeIndex v : nodes) {
    allowed[v] = true;
    if (const auto* c = category_of(net.node(v), attribute)) {
      label[v] = static_cast<int>(std::lower_bound(table.labels.begin(), table.labels.end(), *c) -
                                  table.labels.begin());
    }
  }
  for (NodeIndex u : nodes) {
    const auto d = bfs_distances(net, u, &allowed);
    for (NodeIndex v : nodes) {
      if (v <= u || d[v] <= 0) continue;
      const auto len = static_cast<std::uint64_t>(d[v]);
      table.global.pairs += 1;
      table.global.total_distance += len;
      if (label[u] >= 0 && label[v] >= 0) {
        auto a = static_cast<std::size_t>(std::min(label[u], label[v]));
        auto b = static_cast<std::size_t>(std::max(label[u], label[v]));
        table.cells[a][b].pairs += 1;
        table.cells[a][b].total_distance += len;
      }
    }
  }
  for (std::size_t a = 0; a < L; ++a) {
    for (std::size_t b = a; b < L; ++b) {
      finish_cell(table.cells[a][b]);
      table.cells[b][a] = table.cells[a][b];
    }
  }
  finish_cell(table.global);
  return table;
}

GeodesicTable geodesic_table_by_groups(const Network& net, const Partition& p,
                                       const std::map<ClusterId, std::string>& groups,
                                       PathRestriction restriction) {
  check_labels(p, groups);
  std::set<std::string> label_set;
  for (ClusterId c = 0; c < p.k; ++c) label_set.insert(groups.at(c));
  GeodesicTable table;
  table.labels.assign(label_set.begin(), label_set.end());
  const std::size_t L = table.labels.size();
  table.cells.assign(L, std::vector<GeodesicCell>(L));

  std::vector<std::vector<NodeIndex>> members(L);
  std::vector<int> label(net.node_count(), -1);
  for (NodeIndex v = 0; v < p.assignment.size(); ++v) {
    const auto& name = groups.at(p.assignment[v]);
    const auto idx = std::lower_bound(table.labels.begin(), table.labels.end(), name) -
                     table.labels.begin();
    label[v] = static_cast<int>(idx);
    members[static_cast<std::size_t>(idx)].push_back(v);
  }

  for (std::size_t a = 0; a < L; ++a) {
    for (std::size_t b = a; b < L; ++b) {
      std::vector<bool> allowed;
      if (restriction == PathRestriction::kGroupUnion) {
        allowed.assign(net.node_count(), false);
        for (NodeIndex v : members[a]) allowed[v] = true;
        for (NodeIndex v : members[b]) allowed[v] = true;
      }
      GeodesicCell& cell = table.cells[a][b];
      for (NodeIndex u : members[a]) {
        const auto d = bfs_distances(net, u, allowed.empty() ? nullptr : &allowed);
        for (NodeIndex v : members[b]) {
          if ((a == b && v <= u) || d[v] <= 0) continue;
          cell.pairs += 1;
          cell.total_distance += static_cast<std::uint64_t>(d[v]);
        }
      }
      finish_cell(cell);
      table.cells[b][a] = cell;
    }
  }
  for (NodeIndex u = 0; u < net.node_count(); ++u) {
    const auto d = bfs_distances(net, u);
    for (NodeIndex v = u + 1; v < net.node_count(); ++v) {
      if (d[v] <= 0) continue;
      table.global.pairs += 1;
      table.global.total_distance += static_cast<std::uint64_t>(d[v]);
    }
  }
  finish_cell(table.global);
  return table;
}

double YearlyRow::share(const std::string& cls) const {
  auto it = counts.find(cls);
  if (it == counts.end() || total == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(total);
}

YearlyTable yearly_distribution(const Network& net, const std::vector<NodeIndex>& scope,
                                const std::string& year_attribute,
                                const std::string& class_attribute, const YearFilter& filter) {
  require_integer(net, year_attribute);
  require_categorical(net, class_attribute);
  return tabulate_years(net, scope, year_attribute, filter, [&](NodeIndex v) {
    return category_of(net.node(v), class_attribute);
  });
}

YearlyTable yearly_group_distribution(const Network& net, const Partition& p,
                                      const std::map<ClusterId, std::string>& groups,
                                      const std::string& year_attribute,
                                      const YearFilter& filter) {
  require_integer(net, year_attribute);
  check_labels(p, groups);
  return tabulate_years(net, all_nodes(net), year_attribute, filter, [&](NodeIndex v) {
    return &groups.at(p.assignment[v]);
  });
}

}  // namespace vmine
