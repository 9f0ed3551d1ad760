#include "vmine/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vmine/error.hpp"
#include "vmine/random.hpp"

namespace vmine {
namespace {

namespace fs = std::filesystem;

constexpr const char* kComponentsFile = "components.json";
constexpr const char* kNullFile = "null.json";
constexpr const char* kOverlayFile = "overlay.json";

std::string write_artifact(const PipelineConfig& config, const std::string& name,
                           const std::string& bytes) {
  fs::create_directories(config.out_dir);
  std::ofstream out(config.out_dir / name, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kInvalidConfig, "cannot write '" + name + "'", "out_dir");
  out << bytes;
  return name;
}

Json read_artifact(const PipelineConfig& config, const std::string& name) {
  std::ifstream in(config.out_dir / name, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingArtifact,
                "artifact '" + name + "' not found; run the step that produces it first", name);
  }
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kParseError, "artifact '" + name + "' is not valid JSON", name);
  return j;
}

Partition read_partition(const PipelineConfig& config, const Network& net, const std::string& name) {
  return partition_from_json(net, read_artifact(config, name));
}

std::uint64_t gate_seed(std::uint64_t seed, const Network& sub) {
  return mix_seed(seed, sub.structure_hash());
}

NullOptions null_options(const PipelineConfig& config) {
  return {config.replicates, config.swaps_per_edge, config.threads};
}

std::string round2(double x) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << x;
  return s.str();
}

const std::string& require_attribute(const PipelineConfig& config) {
  if (!config.attribute) throw Error(ErrorCode::kInvalidConfig, "--attribute is required", "attribute");
  return *config.attribute;
}

std::optional<std::string> year_attribute(const PipelineConfig& config) {
  return read_manifest(config.manifest).year_attribute;
}

Json groups_json(const std::map<ClusterId, std::string>& labels) {
  Json j = Json::object();
  for (const auto& [c, l] : labels) j[std::to_string(c)] = l;
  return j;
}

std::map<ClusterId, std::string> groups_from_json(const Json& j) {
  const Json& labels = j.contains("labels") ? j.at("labels") : j;
  std::map<ClusterId, std::string> out;
  for (const auto& [k, v] : labels.items()) {
    out[static_cast<ClusterId>(std::stoul(k))] = v.get<std::string>();
  }
  return out;
}

}  // namespace

void validate(const PipelineConfig& c) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw Error(ErrorCode::kInvalidConfig, field + ": " + why, field);
  };
  if (c.manifest.empty()) fail("manifest", "a dataset manifest is required");
  if (c.out_dir.empty()) fail("out_dir", "an output directory is required");
  if (c.replicates < 1) fail("replicates", "R must be >= 1");
  if (c.swaps_per_edge < 1) fail("swaps_per_edge", "must be >= 1");
  if (c.threads < 1) fail("threads", "must be >= 1");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) fail("alpha", "must lie in (0, 1)");
  if (c.layout_iterations < 1) fail("layout_iterations", "must be >= 1");
  if (c.category && !c.attribute) fail("category", "needs --attribute");
}

Network load_scope(const PipelineConfig& config, std::vector<std::size_t>* component_sizes) {
  const Network full = read_dataset(read_manifest(config.manifest));
  const auto comps = connected_components(full);
  if (component_sizes) {
    component_sizes->clear();
    for (const auto& c : comps) component_sizes->push_back(c.size());
  }
  if (!config.giant_only || comps.empty()) return full;
  return induced_subgraph(full, comps[0]);
}

std::map<ClusterId, std::string> majority_labels(const Network& net, const Partition& p,
                                                 const std::string& attribute) {
  std::vector<std::map<std::string, std::size_t>> tallies(p.k);
  for (NodeIndex v = 0; v < p.assignment.size(); ++v) {
    if (const auto* s = std::get_if<std::string>(&net.node(v).attribute(attribute))) {
      ++tallies[p.assignment[v]][*s];
    }
  }
  std::map<ClusterId, std::string> out;
  for (ClusterId c = 0; c < p.k; ++c) {
    std::string best = "none";
    std::size_t count = 0;
    for (const auto& [value, n] : tallies[c]) {
      if (n > count) {
        best = value;
        count = n;
      }
    }
    out[c] = best;
  }
  return out;
}

std::string PipelineReport::summary() const {
  std::ostringstream s;
  std::size_t isolated = 0;
  for (std::size_t n : component_sizes) isolated += n == 1 ? 1 : 0;
  s << "components: " << component_sizes.size() << " (largest "
    << (component_sizes.empty() ? 0 : component_sizes.front()) << ", isolated " << isolated << ")\n";
  s << "scope: " << scope_nodes << " nodes, " << scope_edges << " edges\n";
  s << "clusters: " << clusters << ", modularity " << round2(modularity) << "\n";
  s << "null threshold: " << round2(threshold) << " -> "
    << (significant ? "significant" : "not significant") << "\n";
  if (clusters_with_substructure) {
    s << "clusters with significant substructure: " << *clusters_with_substructure << " of "
      << clusters << "\n";
  }
  return s.str();
}

namespace steps {

std::vector<std::string> components(const PipelineConfig& config) {
  std::vector<std::size_t> sizes;
  const Network scope = load_scope(config, &sizes);
  std::size_t isolated = 0;
  for (std::size_t n : sizes) isolated += n == 1 ? 1 : 0;
  Json j{{"format_version", std::string(kFormatVersion)},
         {"kind", "components"},
         {"count", sizes.size()},
         {"sizes", sizes},
         {"isolated", isolated},
         {"scope", config.giant_only ? "giant" : "all"},
         {"scope_nodes", scope.node_count()},
         {"scope_edges", scope.edge_count()}};
  return {write_artifact(config, kComponentsFile, canonical_dump(j))};
}

std::vector<std::string> cluster(const PipelineConfig& config) {
  const Network net = load_scope(config);
  const Partition p = vmine::cluster(net, config.seed);
  Json j = to_json(net, p);
  j["seed"] = config.seed;
  return {write_artifact(config, "partition.json", canonical_dump(j))};
}

std::vector<std::string> refine(const PipelineConfig& config, const std::string& partition_file,
                                const std::vector<ClusterId>& targets, bool gated) {
  const Network net = load_scope(config);
  const Partition parent = read_partition(config, net, partition_file);
  std::vector<ClusterId> chosen = targets;
  Json verdicts = Json::array();
  if (gated) {
    chosen.clear();
    for (ClusterId c : std::set<ClusterId>(targets.begin(), targets.end())) {
      if (c >= parent.k) throw Error(ErrorCode::kUnknownCluster, "no such cluster", std::to_string(c));
      const Network sub = induced_subgraph(net, parent.members()[c]);
      const GateVerdict v = gate_refinement(net, parent, c, gate_seed(config.seed, sub), null_options(config));
      verdicts.push_back({{"cluster", c},
                          {"accepted", v.accepted},
                          {"sub_clusters", v.sub_partition.k},
                          {"sub_modularity", v.sub_partition.modularity},
                          {"threshold", v.evaluated ? Json(v.summary.threshold) : Json(nullptr)}});
      if (v.accepted) chosen.push_back(c);
    }
  }
  const SteppedPartition child = vmine::refine(net, parent, chosen, config.seed);
  Json j = to_json(net, child.partition);
  j["parent"] = hex64(parent.fingerprint());
  j["step"] = to_json(child.step);
  if (gated) j["verdicts"] = verdicts;
  return {write_artifact(config, "refined.json", canonical_dump(j))};
}

std::vector<std::string> coarsen(const PipelineConfig& config, const std::string& partition_file,
                                 std::size_t target_k) {
  const Network net = load_scope(config);
  const Partition parent = read_partition(config, net, partition_file);
  const SteppedPartition child = vmine::coarsen(net, parent, target_k);
  Json j = to_json(net, child.partition);
  j["parent"] = hex64(parent.fingerprint());
  j["step"] = to_json(child.step);
  if (fs::exists(config.out_dir / kNullFile)) {
    const NullModelSummary s = null_summary_from_json(read_artifact(config, kNullFile));
    j["significant"] = is_significant(child.partition.modularity, s);
  }
  return {write_artifact(config, "coarsened.json", canonical_dump(j))};
}

std::vector<std::string> null_model(const PipelineConfig& config) {
  const Network net = load_scope(config);
  const NullModelSummary s = null_threshold(net, config.seed, null_options(config));
  return {write_artifact(config, kNullFile, canonical_dump(to_json(s)))};
}

std::vector<std::string> gates(const PipelineConfig& config, const std::string& partition_file) {
  const Network net = load_scope(config);
  const Partition p = read_partition(config, net, partition_file);
  const auto members = p.members();
  Json verdicts = Json::array();
  std::size_t accepted = 0;
  for (ClusterId c = 0; c < p.k; ++c) {
    const Network sub = induced_subgraph(net, members[c]);
    const GateVerdict v = gate_refinement(net, p, c, gate_seed(config.seed, sub), null_options(config));
    accepted += v.accepted ? 1 : 0;
    verdicts.push_back({{"cluster", c},
                        {"size", members[c].size()},
                        {"evaluated", v.evaluated},
                        {"accepted", v.accepted},
                        {"sub_clusters", v.sub_partition.k},
                        {"sub_modularity", v.sub_partition.modularity},
                        {"threshold", v.evaluated ? Json(v.summary.threshold) : Json(nullptr)}});
  }
  Json j{{"format_version", std::string(kFormatVersion)},
         {"kind", "gates"},
         {"partition", hex64(p.fingerprint())},
         {"replicates", config.replicates},
         {"accepted", accepted},
         {"verdicts", verdicts}};
  return {write_artifact(config, "gates.json", canonical_dump(j))};
}

std::vector<std::string> test(const PipelineConfig& config, const std::string& partition_file) {
  const std::string& attribute = require_attribute(config);
  const Network net = load_scope(config);
  const Partition p = read_partition(config, net, partition_file);
  const TestOverlay o = chi_squared_overlay(net, p, attribute);
  if (config.category) {
    style_overlay(LayoutResult{std::vector<Point>(p.k), std::vector<double>(p.k), {}, {}, 1, 0}, o,
                  config.category, config.alpha);
  }
  Json j = to_json(o);
  j["partition"] = hex64(p.fingerprint());
  j["category"] = config.category ? Json(*config.category) : Json(nullptr);
  j["alpha"] = config.alpha;
  Json atypical = Json::array();
  for (const auto& t : o.clusters) {
    if (t.p_value < config.alpha) atypical.push_back(t.cluster);
  }
  j["atypical"] = atypical;
  return {write_artifact(config, kOverlayFile, canonical_dump(j))};
}

std::vector<std::string> layout(const PipelineConfig& config, const std::string& partition_file) {
  const Network net = load_scope(config);
  const Partition p = read_partition(config, net, partition_file);
  const ClusterGraph cg = build_cluster_graph(net, p);
  LayoutOptions lo;
  lo.iterations = config.layout_iterations;
  const LayoutResult l = fr_layout(cg, mix_seed(config.seed, p.fingerprint()), lo);
  StyledLayout styled = unstyled(l);
  if (fs::exists(config.out_dir / kOverlayFile)) {
    const Json oj = read_artifact(config, kOverlayFile);
    if (oj.value("partition", std::string{}) == hex64(p.fingerprint())) {
      std::optional<std::string> category;
      if (oj.contains("category") && !oj.at("category").is_null()) category = oj.at("category").get<std::string>();
      styled = style_overlay(l, overlay_from_json(oj), category, oj.value("alpha", config.alpha));
    }
  }
  Json j = to_json(styled, cg);
  j["format_version"] = std::string(kFormatVersion);
  j["kind"] = "styled_layout";
  j["partition"] = hex64(p.fingerprint());
  return {write_artifact(config, "layout.json", canonical_dump(j)),
          write_artifact(config, "layout.svg", render_svg(styled, cg))};
}

std::vector<std::string> geodesics(const PipelineConfig& config, const std::string& by,
                                   const std::string& partition_file,
                                   const std::optional<fs::path>& groups_file) {
  const Network net = load_scope(config);
  if (by == "attribute") {
    const GeodesicTable t = geodesic_table_by_attribute(net, all_nodes(net), require_attribute(config));
    return {write_artifact(config, "geodesics_attribute.csv", geodesic_csv(t)),
            write_artifact(config, "geodesics_attribute.json", canonical_dump(to_json(t)))};
  }
  if (by != "groups") throw Error(ErrorCode::kInvalidConfig, "--by must be attribute or groups", "by");
  const Partition p = read_partition(config, net, partition_file);
  std::map<ClusterId, std::string> labels;
  if (groups_file) {
    std::ifstream in(*groups_file);
    if (!in) throw Error(ErrorCode::kMissingArtifact, "cannot open groups file", groups_file->string());
    labels = groups_from_json(Json::parse(in));
  } else if (config.group_attribute) {
    labels = majority_labels(net, p, *config.group_attribute);
  } else {
    labels = groups_from_json(read_artifact(config, "groups.json"));
  }
  const GeodesicTable t = geodesic_table_by_groups(net, p, labels);
  return {write_artifact(config, "geodesics_groups.csv", geodesic_csv(t)),
          write_artifact(config, "geodesics_groups.json", canonical_dump(to_json(t)))};
}

}  // namespace steps

PipelineReport run_pipeline(const PipelineConfig& config) {
  validate(config);
  PipelineReport report;
  const Network net = load_scope(config, &report.component_sizes);
  report.scope_nodes = net.node_count();
  report.scope_edges = net.edge_count();
  auto add = [&](std::vector<std::string> files) {
    report.files.insert(report.files.end(), files.begin(), files.end());
  };

  add(steps::components(config));
  add(steps::cluster(config));
  add(steps::null_model(config));
  const Partition p = read_partition(config, net, "partition.json");
  const NullModelSummary null = null_summary_from_json(read_artifact(config, kNullFile));
  report.clusters = p.k;
  report.modularity = p.modularity;
  report.threshold = null.threshold;
  report.significant = is_significant(p.modularity, null);

  if (config.gate_clusters) {
    add(steps::gates(config, "partition.json"));
    report.clusters_with_substructure = read_artifact(config, "gates.json").at("accepted").get<std::size_t>();
  }
  if (config.attribute) add(steps::test(config, "partition.json"));
  add(steps::layout(config, "partition.json"));

  const auto years = year_attribute(config);
  if (config.attribute) {
    add(steps::geodesics(config, "attribute", "partition.json", std::nullopt));
    if (years) {
      const YearlyTable t = yearly_distribution(net, all_nodes(net), *years, *config.attribute,
                                                config.year_filter);
      add({write_artifact(config, "yearly_attribute.csv", yearly_csv(t))});
    }
  }

  if (config.group_attribute) {
    const auto labels = majority_labels(net, p, *config.group_attribute);
    Json gj{{"format_version", std::string(kFormatVersion)},
            {"kind", "groups"},
            {"attribute", *config.group_attribute},
            {"partition", hex64(p.fingerprint())},
            {"labels", groups_json(labels)}};
    add({write_artifact(config, "groups.json", canonical_dump(gj))});
    add(steps::geodesics(config, "groups", "partition.json", std::nullopt));
    if (config.attribute) {
      std::vector<std::string> names;
      const Partition grouped = merge_into_groups(net, p, labels, &names);
      const TestOverlay o = chi_squared_overlay(net, grouped, *config.attribute);
      Json oj = to_json(o);
      Json group_names = Json::object();
      for (ClusterId c = 0; c < names.size(); ++c) group_names[std::to_string(c)] = names[c];
      oj["group_labels"] = group_names;
      oj["alpha"] = config.alpha;
      add({write_artifact(config, "overlay_groups.json", canonical_dump(oj))});
    }
    if (years) {
      const YearlyTable t = yearly_group_distribution(net, p, labels, *years, config.year_filter);
      add({write_artifact(config, "yearly_groups.csv", yearly_csv(t))});
    }
  }

  Json summary{{"format_version", std::string(kFormatVersion)},
               {"kind", "summary"},
               {"component_sizes", report.component_sizes},
               {"scope_nodes", report.scope_nodes},
               {"scope_edges", report.scope_edges},
               {"clusters", report.clusters},
               {"modularity", report.modularity},
               {"threshold", report.threshold},
               {"significant", report.significant},
               {"replicates", config.replicates},
               {"seed", config.seed},
               {"files", report.files}};
  if (report.clusters_with_substructure) summary["clusters_with_substructure"] = *report.clusters_with_substructure;
  add({write_artifact(config, "summary.json", canonical_dump(summary))});
  return report;
}

}  // namespace vmine
