#pragma once

#include <cstdint>
#include <vector>

#include "vmine/clustering.hpp"
#include "vmine/network.hpp"

namespace vmine {

struct NullOptions {
  std::size_t replicates = 50;
  std::size_t swaps_per_edge = 10;
  /// Worker threads for replicates; results do not depend on it.
  std::size_t threads = 1;
};

/// Maximal modularities reached on degree-preserving randomizations.
struct NullModelSummary {
  std::vector<double> replicate_modularity;
  double threshold = 0.0;
  std::uint64_t degree_fingerprint = 0;
  std::uint64_t seed = 0;
  std::size_t swaps_per_edge = 0;

  std::size_t replicates() const { return replicate_modularity.size(); }
  friend bool operator==(const NullModelSummary&, const NullModelSummary&) = default;
};

/// Double-edge swaps: swaps_per_edge * m attempts, each picking two distinct
/// edges uniformly and one of the two reconnections; attempts that would
/// create a self-loop or a duplicate edge are skipped. Per-node degrees are
/// preserved exactly. Throws TooFewEdges when m < 2.
Network rewire(const Network& net, std::uint64_t seed, std::size_t swaps_per_edge);

/// Hash of the per-node degree sequence in node order.
std::uint64_t degree_fingerprint(const Network& net);

/// Replicate i rewires with mix_seed(seed, i) and clusters the result.
NullModelSummary null_threshold(const Network& net, std::uint64_t seed,
                                const NullOptions& options = {});

/// Strictly above the null threshold.
inline bool is_significant(double q_observed, const NullModelSummary& summary) {
  return q_observed > summary.threshold;
}

struct GateVerdict {
  bool accepted = false;
  /// Partition of the target's induced subgraph (node i = i-th smallest member).
  Partition sub_partition;
  NullModelSummary summary;
  /// False when the subgraph had fewer than two edges and no null was run.
  bool evaluated = false;
};

/// Clusters the target's induced subgraph in isolation and accepts the split
/// iff its modularity beats that subgraph's own null and it has >= 2 clusters.
GateVerdict gate_refinement(const Network& net, const Partition& p, ClusterId target,
                            std::uint64_t seed, const NullOptions& options = {});

}  // namespace vmine
