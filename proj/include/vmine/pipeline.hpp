#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vmine/io.hpp"

namespace vmine {

/// Settings shared by the batch workflow and its individual subcommands.
struct PipelineConfig {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  std::size_t replicates = 50;
  std::size_t swaps_per_edge = 10;
  std::size_t threads = 1;
  std::optional<std::string> attribute;
  std::optional<std::string> category;
  double alpha = 0.05;
  /// Labels each cluster by the majority value of this attribute and
  /// repeats the overlay, geodesic and yearly analyses on those groups.
  std::optional<std::string> group_attribute;
  YearFilter year_filter;
  /// Restrict to the largest connected component (otherwise every node).
  bool giant_only = true;
  std::size_t layout_iterations = 500;
  /// Run the refinement gate on every cluster.
  bool gate_clusters = true;
};

/// Throws InvalidConfig naming the offending field.
void validate(const PipelineConfig& config);

struct PipelineReport {
  std::vector<std::size_t> component_sizes;
  std::size_t scope_nodes = 0;
  std::size_t scope_edges = 0;
  std::size_t clusters = 0;
  double modularity = 0.0;
  double threshold = 0.0;
  bool significant = false;
  std::optional<std::size_t> clusters_with_substructure;
  std::vector<std::string> files;

  std::string summary() const;
};

/// ingest -> components -> cluster -> null -> gates -> overlay -> layout ->
/// geodesics -> yearly tables; every artifact written canonically to out_dir.
PipelineReport run_pipeline(const PipelineConfig& config);

/// Individually re-runnable steps. Each reads the manifest plus whatever
/// earlier artifacts it needs from out_dir (MissingArtifact otherwise) and
/// returns the files it wrote.
namespace steps {

std::vector<std::string> components(const PipelineConfig& config);
std::vector<std::string> cluster(const PipelineConfig& config);
std::vector<std::string> refine(const PipelineConfig& config, const std::string& partition_file,
                                const std::vector<ClusterId>& targets, bool gated);
std::vector<std::string> coarsen(const PipelineConfig& config, const std::string& partition_file,
                                 std::size_t target_k);
std::vector<std::string> null_model(const PipelineConfig& config);
/// Refinement gate verdict for every cluster of the partition.
std::vector<std::string> gates(const PipelineConfig& config, const std::string& partition_file);
std::vector<std::string> test(const PipelineConfig& config, const std::string& partition_file);
std::vector<std::string> layout(const PipelineConfig& config, const std::string& partition_file);
/// by = "attribute" or "groups"; groups_file maps cluster ids to labels.
std::vector<std::string> geodesics(const PipelineConfig& config, const std::string& by,
                                   const std::string& partition_file,
                                   const std::optional<std::filesystem::path>& groups_file);

}  // namespace steps

/// Loads the manifest's network restricted to the configured scope.
Network load_scope(const PipelineConfig& config, std::vector<std::size_t>* component_sizes = nullptr);

/// Majority value of `attribute` per cluster (ties to the smallest value,
/// clusters without values labeled "none").
std::map<ClusterId, std::string> majority_labels(const Network& net, const Partition& p,
                                                 const std::string& attribute);

}  // namespace vmine
