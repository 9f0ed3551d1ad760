#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "vmine/io.hpp"
#include "vmine/session_state.hpp"

namespace vmine {

struct SessionOptions {
  std::uint64_t seed = 0;
  double alpha = 0.05;
  NullOptions null;
  std::size_t layout_iterations = 500;
  std::optional<std::string> year_attribute;
  YearFilter year_filter;
};

struct RefineVerdict {
  ClusterId cluster = 0;
  bool accepted = false;
  /// False when the cluster had < 2 internal edges and no null was run.
  bool evaluated = false;
  ClusterId sub_clusters = 1;
  double sub_modularity = 0.0;
  std::optional<double> threshold;
};

struct RefineOutcome {
  std::vector<RefineVerdict> verdicts;
  bool changed = false;
};

struct CoarsenOutcome {
  double modularity = 0.0;
  std::optional<bool> significant;
};

/// One analyst's exploration of a network: the current partition, its
/// refine/coarsen history with undo/redo, overlays and named groups.
///
/// Mutating calls take the session exclusively; state() may run concurrently
/// with other readers and always sees a whole snapshot.
class Session {
 public:
  /// Clusters `network`, lays it out and builds the global null model.
  Session(std::string id, std::string dataset, std::shared_ptr<const Network> network,
          SessionOptions options);

  SessionState state() const;
  std::string export_bytes(ExportKind kind) const;

  /// Gate verdicts are cached per induced subgraph; rejected targets stay as
  /// they are. No history entry unless at least one split is accepted.
  RefineOutcome refine(const std::vector<ClusterId>& targets);
  /// Throws BadTarget.
  CoarsenOutcome coarsen(std::size_t target_k);
  /// Throws UnknownAttribute, DegenerateGlobal, UnknownCategory.
  TestOverlay overlay(const std::string& attribute, const std::optional<std::string>& category);
  /// Throws UnlabeledCluster.
  Snapshot groups(const std::map<ClusterId, std::string>& labels);

  /// Throws NothingToUndo / NothingToRedo.
  void undo();
  void redo();

  /// Number of null-model computations actually run for refinement gates.
  std::size_t gate_evaluations() const;

 private:
  void push(Snapshot next);
  LayoutResult warm_layout(const Partition& parent, const LayoutResult& parent_layout,
                           const Partition& child) const;
  std::optional<TestOverlay> carried_overlay(const Snapshot& from, const Partition& child) const;

  SessionOptions options_;
  mutable std::shared_mutex mutex_;
  SessionState state_;
  std::map<std::uint64_t, GateVerdict> gate_cache_;
  std::size_t gate_evaluations_ = 0;
};

}  // namespace vmine
