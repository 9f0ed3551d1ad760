#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vmine/network.hpp"

namespace vmine {

using ClusterId = std::uint32_t;

/// Assignment of every node of a network to one of k dense clusters.
///
/// Partitions produced here are canonical: cluster ids are numbered by the
/// order of each cluster's smallest member, so equal groupings compare equal.
struct Partition {
  std::vector<ClusterId> assignment;
  ClusterId k = 0;
  double modularity = 0.0;

  std::vector<std::vector<NodeIndex>> members() const;
  std::vector<std::size_t> sizes() const;
  /// Hash of the assignment (modularity excluded; it is derived).
  std::uint64_t fingerprint() const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Renumbers clusters canonically; `assignment` may use any ids.
/// Modularity is left at 0, see with_modularity().
Partition canonical_partition(std::vector<ClusterId> assignment);
/// Canonical partition with modularity recomputed on `net`.
Partition make_partition(const Network& net, std::vector<ClusterId> assignment);

struct MetaEdge {
  ClusterId a;  // a < b
  ClusterId b;
  std::size_t weight;

  friend bool operator==(const MetaEdge&, const MetaEdge&) = default;
};

/// Metagraph of a partition.
struct ClusterGraph {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> internal_edges;
  /// Sum of member degrees in the full network.
  std::vector<std::size_t> total_degree;
  /// Sorted by (a, b).
  std::vector<MetaEdge> edges;

  std::size_t cluster_count() const { return sizes.size(); }
  std::size_t weight(ClusterId a, ClusterId b) const;
};

ClusterGraph build_cluster_graph(const Network& net, const Partition& p);

/// Newman-Girvan modularity. Throws EmptyGraph when m = 0.
double modularity(const Network& net, const Partition& p);
double modularity(const ClusterGraph& cg, std::size_t m);

/// Exact modularity change of merging clusters a and b. Throws UnknownCluster
/// (also for a == b).
double delta_q_merge(const ClusterGraph& cg, std::size_t m, ClusterId a, ClusterId b);

/// Local modularity maximum: greedy merging of adjacent clusters from
/// singletons, then single-node move sweeps, repeated until neither step
/// improves Q. The seed only orders tie-broken choices. Throws EmptyGraph.
Partition cluster(const Network& net, std::uint64_t seed);

enum class StepKind { kRefine, kCoarsen };

struct HierarchyStep {
  StepKind kind;
  std::uint64_t parent;  // Partition::fingerprint()
  std::uint64_t child;
  /// Cluster ids in the parent partition that were split or merged.
  std::vector<ClusterId> affected;
};

struct SteppedPartition {
  Partition partition;
  HierarchyStep step;
};

/// Greedy merges down to target_k clusters, always the adjacent pair with
/// the largest dQ (smallest id pair on ties). Throws BadTarget.
SteppedPartition coarsen(const Network& net, const Partition& p, std::size_t target_k);

/// Replaces each target cluster with the clustering of its induced subgraph.
/// Throws UnknownCluster.
SteppedPartition refine(const Network& net, const Partition& p,
                        const std::vector<ClusterId>& targets, std::uint64_t seed);

/// Merges clusters sharing a label. Cluster ids of the result follow the
/// canonical order; `labels_out`, when given, receives each new cluster's label.
/// Throws UnlabeledCluster.
Partition merge_into_groups(const Network& net, const Partition& p,
                            const std::map<ClusterId, std::string>& groups,
                            std::vector<std::string>* labels_out = nullptr);

}  // namespace vmine
