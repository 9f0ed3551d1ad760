#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "vmine/clustering.hpp"
#include "vmine/layout.hpp"
#include "vmine/network.hpp"
#include "vmine/session_state.hpp"
#include "vmine/significance.hpp"
#include "vmine/stats.hpp"

namespace vmine {

using Json = nlohmann::json;

inline constexpr std::string_view kFormatVersion = "1";

/// Where the node and edge tables live and how to read them.
struct DatasetManifest {
  std::filesystem::path node_file;
  std::filesystem::path edge_file;
  std::string node_id_column = "id";
  std::string edge_source_column = "source";
  std::string edge_target_column = "target";
  std::optional<std::string> direction_column;
  AttributeSchema attributes;
  std::optional<std::string> year_attribute;
  /// Auto-detected from the header (tab if present, else comma) when unset.
  std::optional<char> delimiter;
};

/// Parses a manifest JSON file; relative table paths resolve against the
/// manifest's directory. Throws ParseError, SchemaMismatch.
DatasetManifest read_manifest(const std::filesystem::path& path);
DatasetManifest manifest_from_json(const Json& j, const std::filesystem::path& base_dir);
Json to_json(const DatasetManifest& m);

/// Loads both tables through build_network. Every rejection names the file
/// and 1-based line in Error::detail ("nodes.csv:12").
Network read_dataset(const DatasetManifest& manifest);

/// Splits one delimited line, honoring double quotes.
std::vector<std::string> split_delimited(std::string_view line, char delimiter);

/// Shortest round-trip decimal rendering.
std::string format_real(double x);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_dump(const Json& j);

Json to_json(const Network& net);
Network network_from_json(const Json& j);

Json to_json(const Network& net, const Partition& p);
Partition partition_from_json(const Network& net, const Json& j);

Json to_json(const HierarchyStep& step);
Json to_json(const ClusterGraph& cg);
Json to_json(const NullModelSummary& s);
NullModelSummary null_summary_from_json(const Json& j);
Json to_json(const TestOverlay& o);
TestOverlay overlay_from_json(const Json& j);
Json to_json(const GeodesicTable& t);
GeodesicTable geodesic_table_from_json(const Json& j);
Json to_json(const YearlyTable& t);
Json to_json(const LayoutResult& layout);
LayoutResult layout_from_json(const Json& j);
Json to_json(const StyledLayout& styled, const ClusterGraph& cg);

/// Header row of labels, then one row per label; undefined cells empty.
std::string geodesic_csv(const GeodesicTable& t);
/// year,class,count,share rows in year then class order.
std::string yearly_csv(const YearlyTable& t);
/// Static SVG 1.1: one <circle>/<rect> glyph per cluster, one <line> per meta-edge.
std::string render_svg(const StyledLayout& styled, const ClusterGraph& cg);

std::string hex64(std::uint64_t v);

enum class ExportKind { kJson, kSvg, kCsvTables };

/// Canonical serialization of the current session snapshot. csv-tables
/// needs group tables to have been computed. Throws MissingArtifact.
std::string export_session(const SessionState& state, ExportKind kind);
Json session_payload(const SessionState& state);
/// Observable content of the current snapshot only (no history bookkeeping).
Json snapshot_payload(const SessionState& state);
/// Throws InvalidConfig for anything but json, svg, csv.
ExportKind parse_export_kind(std::string_view kind);

}  // namespace vmine
