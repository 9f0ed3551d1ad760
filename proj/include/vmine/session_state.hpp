#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vmine/clustering.hpp"
#include "vmine/layout.hpp"
#include "vmine/network.hpp"
#include "vmine/significance.hpp"
#include "vmine/stats.hpp"

namespace vmine {

/// Everything an analyst can observe at one point of the exploration.
struct Snapshot {
  Partition partition;
  LayoutResult layout;
  /// How this snapshot was reached from the previous one (none for the root).
  std::optional<HierarchyStep> step;
  std::string operation = "create";

  std::optional<TestOverlay> overlay;
  std::optional<std::string> overlay_category;

  std::map<ClusterId, std::string> groups;
  std::optional<GeodesicTable> group_geodesics;
  std::optional<YearlyTable> group_years;
};

struct SessionState {
  std::string id;
  std::string dataset;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::shared_ptr<const Network> network;
  std::optional<NullModelSummary> global_null;

  std::vector<Snapshot> history;
  /// Index of the current snapshot in history.
  std::size_t cursor = 0;

  const Snapshot& current() const { return history.at(cursor); }
};

}  // namespace vmine
