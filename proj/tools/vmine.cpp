// Command line driver: the full batch workflow plus one subcommand per step.

#include <csignal>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "vmine/error.hpp"
#include "vmine/pipeline.hpp"
#include "vmine/server.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

vmine::HttpFrontend* g_frontend = nullptr;

void on_signal(int) {
  if (g_frontend) g_frontend->stop();
}

// Bad flags, unreadable or malformed inputs and references to things that do
// not exist are the caller's fault; everything else is a runtime failure.
int exit_code(vmine::ErrorCode code) {
  using vmine::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kParseError:
    case ErrorCode::kSchemaMismatch:
    case ErrorCode::kUnknownEndpoint:
    case ErrorCode::kDuplicateNodeId:
    case ErrorCode::kSelfLoop:
    case ErrorCode::kUnknownNodeId:
    case ErrorCode::kUnknownAttribute:
    case ErrorCode::kUnknownCategory:
    case ErrorCode::kUnknownCluster:
    case ErrorCode::kBadTarget:
    case ErrorCode::kUnlabeledCluster:
    case ErrorCode::kNotIntegerAttribute:
      return kExitInput;
    default:
      return kExitRuntime;
  }
}

void print_files(const std::vector<std::string>& files) {
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cluster, test and explore contact networks"};
  app.require_subcommand(1);

  vmine::PipelineConfig config;
  std::string out_dir;
  std::string scope = "giant";
  std::string partition_file = "partition.json";
  std::optional<int> min_year;
  std::optional<int> max_year;

  auto common = [&](CLI::App* sub, bool needs_manifest = true) {
    auto* m = sub->add_option("--manifest", config.manifest, "Dataset manifest (JSON)");
    if (needs_manifest) m->required();
    sub->add_option("--out", out_dir, "Output directory")->envname("VMINE_OUT");
    sub->add_option("--seed", config.seed, "Random seed");
    sub->add_option("--scope", scope, "Nodes to analyse")->check(CLI::IsMember({"giant", "all"}));
  };
  auto null_flags = [&](CLI::App* sub) {
    sub->add_option("-R,--replicates", config.replicates, "Null model replicates");
    sub->add_option("--swaps-per-edge", config.swaps_per_edge, "Swap attempts per edge");
    sub->add_option("--threads", config.threads, "Worker threads for null replicates");
  };
  auto attribute_flags = [&](CLI::App* sub) {
    sub->add_option("--attribute", config.attribute, "Categorical attribute under test");
    sub->add_option("--category", config.category, "Category whose residuals shape the layout");
    sub->add_option("--alpha", config.alpha, "Significance level");
  };
  auto partition_flag = [&](CLI::App* sub) {
    sub->add_option("--partition", partition_file, "Partition artifact in the output directory");
  };

  auto* run = app.add_subcommand("run", "Full workflow");
  common(run);
  null_flags(run);
  attribute_flags(run);
  run->add_option("--group-attribute", config.group_attribute,
                  "Group clusters by the majority value of this attribute");
  run->add_option("--min-year", min_year);
  run->add_option("--max-year", max_year);
  run->add_flag("--drop-last-year", config.year_filter.drop_last_year, "Treat the last year as incomplete");
  run->add_option("--layout-iterations", config.layout_iterations);
  bool no_gates = false;
  run->add_flag("--no-gates", no_gates, "Skip the per-cluster refinement gate");

  auto* components = app.add_subcommand("components", "Connected components");
  common(components);

  auto* cluster = app.add_subcommand("cluster", "Modularity clustering of the scope");
  common(cluster);

  std::vector<vmine::ClusterId> targets;
  bool gated = false;
  auto* refine = app.add_subcommand("refine", "Re-cluster selected clusters");
  common(refine);
  null_flags(refine);
  partition_flag(refine);
  refine->add_option("--cluster", targets, "Cluster to refine (repeatable)")->required();
  refine->add_flag("--gate", gated, "Only refine clusters whose split beats the null model");

  std::size_t target_k = 0;
  auto* coarsen = app.add_subcommand("coarsen", "Greedily merge clusters down to k");
  common(coarsen);
  partition_flag(coarsen);
  coarsen->add_option("--k", target_k, "Target cluster count")->required();

  auto* null = app.add_subcommand("null", "Null model threshold from degree-preserving rewiring");
  common(null);
  null_flags(null);

  auto* test = app.add_subcommand("test", "Chi-squared overlay of an attribute");
  common(test);
  partition_flag(test);
  attribute_flags(test);
  test->get_option("--attribute")->required();

  std::string by = "attribute";
  std::optional<std::string> groups_file;
  auto* geodesics = app.add_subcommand("geodesics", "Mean shortest-path tables");
  common(geodesics);
  partition_flag(geodesics);
  geodesics->add_option("--by", by)->check(CLI::IsMember({"attribute", "groups"}));
  geodesics->add_option("--attribute", config.attribute);
  geodesics->add_option("--group-attribute", config.group_attribute);
  geodesics->add_option("--groups", groups_file, "JSON map of cluster id to group label");

  auto* layout = app.add_subcommand("layout", "Metagraph layout (JSON and SVG)");
  common(layout);
  partition_flag(layout);
  layout->add_option("--layout-iterations", config.layout_iterations);

  std::string host = "127.0.0.1";
  int port = 8080;
  double serve_alpha = 0.05;
  auto* serve = app.add_subcommand("serve", "Start the exploration HTTP API");
  common(serve, false);
  null_flags(serve);
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--alpha", serve_alpha);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  config.out_dir = out_dir.empty() ? std::filesystem::path("vmine-out") : std::filesystem::path(out_dir);
  config.giant_only = scope == "giant";
  config.gate_clusters = !no_gates;
  if (min_year) config.year_filter.min_year = *min_year;
  if (max_year) config.year_filter.max_year = *max_year;

  try {
    if (*serve) {
      vmine::ServerOptions options;
      options.null = {config.replicates, config.swaps_per_edge, config.threads};
      options.alpha = serve_alpha;
      vmine::Api api(options);
      if (!config.manifest.empty()) {
        const auto manifest = vmine::read_manifest(config.manifest);
        auto net = std::make_shared<const vmine::Network>(vmine::read_dataset(manifest));
        std::cout << "dataset " << api.add_dataset(net, manifest.year_attribute) << " loaded\n";
      }
      vmine::HttpFrontend frontend(api);
      const int bound = frontend.bind(host, port);
      if (bound < 0) {
        std::cerr << "error: cannot bind " << host << ":" << port << "\n";
        return kExitRuntime;
      }
      std::cout << "listening on http://" << host << ":" << bound << std::endl;
      g_frontend = &frontend;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      frontend.run();
      return 0;
    }

    vmine::validate(config);
    if (*run) {
      const auto report = vmine::run_pipeline(config);
      std::cout << report.summary();
      std::cout << "artifacts in " << config.out_dir.string() << "\n";
    } else if (*components) {
      print_files(vmine::steps::components(config));
    } else if (*cluster) {
      print_files(vmine::steps::cluster(config));
    } else if (*refine) {
      print_files(vmine::steps::refine(config, partition_file, targets, gated));
    } else if (*coarsen) {
      print_files(vmine::steps::coarsen(config, partition_file, target_k));
    } else if (*null) {
      print_files(vmine::steps::null_model(config));
    } else if (*test) {
      print_files(vmine::steps::test(config, partition_file));
    } else if (*geodesics) {
      std::optional<std::filesystem::path> gf;
      if (groups_file) gf = *groups_file;
      print_files(vmine::steps::geodesics(config, by, partition_file, gf));
    } else if (*layout) {
      print_files(vmine::steps::layout(config, partition_file));
    }
  } catch (const vmine::Error& e) {
    std::cerr << "error [" << vmine::to_string(e.code()) << "]: " << e.what();
    if (!e.detail().empty()) std::cerr << " (" << e.detail() << ")";
    std::cerr << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
