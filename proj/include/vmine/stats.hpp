#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vmine/clustering.hpp"
#include "vmine/network.hpp"

namespace vmine {

struct CategoricalDistribution {
  std::string attribute;
  /// Sorted, duplicate-free.
  std::vector<std::string> categories;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  std::uint64_t count(const std::string& category) const;
  friend bool operator==(const CategoricalDistribution&, const CategoricalDistribution&) = default;
};

/// Counts over the `scope` nodes with a non-missing value. Throws
/// UnknownAttribute, also when the attribute is not categorical.
CategoricalDistribution attribute_distribution(const Network& net,
                                               const std::vector<NodeIndex>& scope,
                                               const std::string& attribute);

/// P(X > x) for X ~ chi-squared(df), via the regularized upper incomplete
/// gamma function Q(df/2, x/2).
double chi_squared_upper_tail(double x, int df);
/// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double regularized_gamma_q(double a, double x);

struct ClusterTest {
  ClusterId cluster = 0;
  std::uint64_t n = 0;
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  /// Pearson residuals (O - E)/sqrt(E), for categories with E > 0.
  std::map<std::string, double> residuals;
  /// Some expected count is below 5; the asymptotic p-value is rough.
  bool low_count = false;

  friend bool operator==(const ClusterTest&, const ClusterTest&) = default;
};

struct TestOverlay {
  std::string attribute;
  CategoricalDistribution global;
  std::vector<ClusterTest> clusters;

  friend bool operator==(const TestOverlay&, const TestOverlay&) = default;
};

struct OverlayOptions {
  /// Reference distribution excludes the tested cluster's own members.
  bool exclude_self = false;
};

/// Goodness-of-fit of each cluster's attribute distribution against the
/// distribution over the whole partition scope. Nodes with a missing value
/// are left out of both sides. Throws UnknownAttribute, DegenerateGlobal.
TestOverlay chi_squared_overlay(const Network& net, const Partition& p,
                                const std::string& attribute, const OverlayOptions& options = {});

struct GeodesicCell {
  std::optional<double> mean;
  std::uint64_t pairs = 0;
  std::uint64_t total_distance = 0;

  friend bool operator==(const GeodesicCell&, const GeodesicCell&) = default;
};

/// Symmetric label x label table of mean shortest-path lengths over
/// connected distinct unordered node pairs.
struct GeodesicTable {
  std::vector<std::string> labels;
  std::vector<std::vector<GeodesicCell>> cells;
  GeodesicCell global;

  friend bool operator==(const GeodesicTable&, const GeodesicTable&) = default;
};

/// Hop distances from `source` over the subgraph induced by `allowed`
/// (nullptr = whole network); -1 where unreachable.
std::vector<int> bfs_distances(const Network& net, NodeIndex source,
                               const std::vector<bool>* allowed = nullptr);

/// Distances are taken within the subgraph induced by `scope`; pairs are
/// classed by the attribute values of their endpoints (missing ones only
/// count toward the global mean). Throws UnknownAttribute.
GeodesicTable geodesic_table_by_attribute(const Network& net, const std::vector<NodeIndex>& scope,
                                          const std::string& attribute);

enum class PathRestriction {
  /// Paths stay inside the union of the two groups being compared.
  kGroupUnion,
  /// Paths may use any node; only endpoints are restricted.
  kWholeScope,
};

/// Group table over a labeled partition (covering the whole network).
/// Throws UnlabeledCluster.
GeodesicTable geodesic_table_by_groups(const Network& net, const Partition& p,
                                       const std::map<ClusterId, std::string>& groups,
                                       PathRestriction restriction = PathRestriction::kGroupUnion);

struct YearlyRow {
  std::int64_t year = 0;
  std::uint64_t total = 0;
  std::map<std::string, std::uint64_t> counts;

  double share(const std::string& cls) const;
  friend bool operator==(const YearlyRow&, const YearlyRow&) = default;
};

struct YearlyTable {
  std::string year_attribute;
  std::vector<std::string> classes;
  std::vector<YearlyRow> rows;  // ascending year, empty years omitted

  friend bool operator==(const YearlyTable&, const YearlyTable&) = default;
};

struct YearFilter {
  std::optional<std::int64_t> min_year;
  std::optional<std::int64_t> max_year;
  /// Drops the largest year present (an incomplete final year).
  bool drop_last_year = false;
};

/// Per-year class counts; classes from a categorical attribute.
/// Throws UnknownAttribute, NotIntegerAttribute.
YearlyTable yearly_distribution(const Network& net, const std::vector<NodeIndex>& scope,
                                const std::string& year_attribute,
                                const std::string& class_attribute, const YearFilter& filter = {});

/// Per-year counts with classes given by cluster group labels.
YearlyTable yearly_group_distribution(const Network& net, const Partition& p,
                                      const std::map<ClusterId, std::string>& groups,
                                      const std::string& year_attribute,
                                      const YearFilter& filter = {});

std::vector<NodeIndex> all_nodes(const Network& net);

}  // namespace vmine
