#include "vmine/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vmine/error.hpp"

namespace vmine {
namespace {

namespace fs = std::filesystem;

struct Table {
  fs::path path;
  std::vector<std::string> header;
  std::vector<std::size_t> lines;  // 1-based source line of each row
  std::vector<std::vector<std::string>> rows;

  std::string where(std::size_t line) const {
    return path.filename().string() + ":" + std::to_string(line);
  }

  std::size_t column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::kSchemaMismatch, "column '" + name + "' not in header", where(1));
    }
    return static_cast<std::size_t>(it - header.begin());
  }
};

Table read_table(const fs::path& path, std::optional<char> delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kParseError, "cannot open '" + path.string() + "'", path.string());
  }
  Table t;
  t.path = path;
  std::string line;
  std::size_t lineno = 0;
  char delim = delimiter.value_or(',');
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      if (!delimiter && line.find('\t') != std::string::npos) delim = '\t';
      t.header = split_delimited(line, delim);
      if (t.header.empty() || (t.header.size() == 1 && t.header[0].empty())) {
        throw Error(ErrorCode::kParseError, "missing header row", t.where(1));
      }
      continue;
    }
    if (line.empty()) continue;
    auto fields = split_delimited(line, delim);
    if (fields.size() != t.header.size()) {
      throw Error(ErrorCode::kParseError,
                  "expected " + std::to_string(t.header.size()) + " fields, found " +
                      std::to_string(fields.size()),
                  t.where(lineno));
    }
    t.lines.push_back(lineno);
    t.rows.push_back(std::move(fields));
  }
  if (lineno == 0) throw Error(ErrorCode::kParseError, "missing header row", t.where(1));
  return t;
}

bool is_missing(const std::string& field) { return field.empty() || field == "NA"; }

std::string direction_name(Direction d) {
  switch (d) {
    case Direction::kUToV: return "uv";
    case Direction::kVToU: return "vu";
    case Direction::kNone: break;
  }
  return "";
}

std::optional<Direction> parse_direction(std::string_view s) {
  if (s.empty()) return Direction::kNone;
  if (s == "uv") return Direction::kUToV;
  if (s == "vu") return Direction::kVToU;
  return std::nullopt;
}

std::string type_name(AttributeType t) {
  return t == AttributeType::kInteger ? "integer" : "categorical";
}

AttributeType parse_type(const std::string& s) {
  if (s == "categorical") return AttributeType::kCategorical;
  if (s == "integer") return AttributeType::kInteger;
  throw Error(ErrorCode::kSchemaMismatch, "attribute type must be categorical or integer", s);
}

void check_version(const Json& j, std::string_view what) {
  if (!j.is_object() || j.value("format_version", std::string{}) != kFormatVersion) {
    throw Error(ErrorCode::kParseError, std::string(what) + ": unsupported or missing format_version");
  }
}

Json versioned(Json body) {
  body["format_version"] = std::string(kFormatVersion);
  return body;
}

Json cell_mean(const GeodesicCell& c) { return c.mean ? Json(*c.mean) : Json(nullptr); }

GeodesicCell cell_from(const Json& mean, const Json& pairs, const Json& total) {
  GeodesicCell c;
  if (!mean.is_null()) c.mean = mean.get<double>();
  c.pairs = pairs.get<std::uint64_t>();
  c.total_distance = total.get<std::uint64_t>();
  return c;
}

std::string gray(double darkness) {
  const int level = static_cast<int>(std::lround(255.0 * (1.0 - std::clamp(darkness, 0.0, 1.0))));
  return "rgb(" + std::to_string(level) + "," + std::to_string(level) + "," +
         std::to_string(level) + ")";
}

std::string escape_xml(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<std::string> split_delimited(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == delimiter) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string format_real(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, 16);
  std::string s(buf, end);
  return std::string(16 - s.size(), '0') + s;
}

std::string canonical_dump(const Json& j) { return j.dump(2) + "\n"; }

// --- manifest & dataset ------------------------------------------------------

DatasetManifest manifest_from_json(const Json& j, const fs::path& base_dir) {
  try {
    check_version(j, "manifest");
    DatasetManifest m;
    const Json& nodes = j.at("nodes");
    const Json& edges = j.at("edges");
    auto resolve = [&](const std::string& p) {
      fs::path path(p);
      return path.is_absolute() ? path : base_dir / path;
    };
    m.node_file = resolve(nodes.at("path").get<std::string>());
    m.node_id_column = nodes.value("id_column", m.node_id_column);
    m.edge_file = resolve(edges.at("path").get<std::string>());
    m.edge_source_column = edges.value("source_column", m.edge_source_column);
    m.edge_target_column = edges.value("target_column", m.edge_target_column);
    if (edges.contains("direction_column")) {
      m.direction_column = edges.at("direction_column").get<std::string>();
    }
    if (j.contains("attributes")) {
      for (const auto& [name, type] : j.at("attributes").items()) {
        m.attributes.emplace(name, parse_type(type.get<std::string>()));
      }
    }
    if (j.contains("year_attribute")) m.year_attribute = j.at("year_attribute").get<std::string>();
    if (j.contains("delimiter")) {
      const auto d = j.at("delimiter").get<std::string>();
      if (d.size() != 1) throw Error(ErrorCode::kParseError, "delimiter must be one character", d);
      m.delimiter = d[0];
    }
    if (m.year_attribute) {
      auto it = m.attributes.find(*m.year_attribute);
      if (it == m.attributes.end() || it->second != AttributeType::kInteger) {
        throw Error(ErrorCode::kSchemaMismatch, "year attribute must be declared integer",
                    *m.year_attribute);
      }
    }
    return m;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed manifest: ") + e.what());
  }
}

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open manifest '" + path.string() + "'", path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("manifest is not valid JSON: ") + e.what(),
                path.string());
  }
  return manifest_from_json(j, path.parent_path());
}

Json to_json(const DatasetManifest& m) {
  Json j;
  j["nodes"] = {{"path", m.node_file.string()}, {"id_column", m.node_id_column}};
  j["edges"] = {{"path", m.edge_file.string()},
                {"source_column", m.edge_source_column},
                {"target_column", m.edge_target_column}};
  if (m.direction_column) j["edges"]["direction_column"] = *m.direction_column;
  Json attrs = Json::object();
  for (const auto& [name, t] : m.attributes) attrs[name] = type_name(t);
  j["attributes"] = attrs;
  if (m.year_attribute) j["year_attribute"] = *m.year_attribute;
  if (m.delimiter) j["delimiter"] = std::string(1, *m.delimiter);
  return versioned(std::move(j));
}

Network read_dataset(const DatasetManifest& manifest) {
  const Table nodes = read_table(manifest.node_file, manifest.delimiter);
  const Table edges = read_table(manifest.edge_file, manifest.delimiter);

  const std::size_t id_col = nodes.column(manifest.node_id_column);
  std::vector<std::pair<std::string, std::size_t>> attr_cols;
  for (const auto& [name, type] : manifest.attributes) attr_cols.emplace_back(name, nodes.column(name));

  std::vector<NodeRecord> records;
  records.reserve(nodes.rows.size());
  for (std::size_t r = 0; r < nodes.rows.size(); ++r) {
    const auto& row = nodes.rows[r];
    NodeRecord rec;
    rec.id = row[id_col];
    if (rec.id.empty()) throw Error(ErrorCode::kParseError, "empty node id", nodes.where(nodes.lines[r]));
    for (const auto& [name, col] : attr_cols) {
      const std::string& field = row[col];
      if (is_missing(field)) continue;
      if (manifest.attributes.at(name) == AttributeType::kInteger) {
        std::int64_t value = 0;
        auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc{} || end != field.data() + field.size()) {
          throw Error(ErrorCode::kSchemaMismatch,
                      "attribute '" + name + "' expects an integer, got '" + field + "'",
                      nodes.where(nodes.lines[r]));
        }
        rec.attributes.emplace(name, value);
      } else {
        rec.attributes.emplace(name, field);
      }
    }
    records.push_back(std::move(rec));
  }

  const std::size_t src_col = edges.column(manifest.edge_source_column);
  const std::size_t dst_col = edges.column(manifest.edge_target_column);
  std::optional<std::size_t> dir_col;
  if (manifest.direction_column) dir_col = edges.column(*manifest.direction_column);
  std::vector<EdgeDeclaration> decls;
  decls.reserve(edges.rows.size());
  for (std::size_t r = 0; r < edges.rows.size(); ++r) {
    const auto& row = edges.rows[r];
    EdgeDeclaration d{row[src_col], row[dst_col], Direction::kNone};
    if (dir_col) {
      auto dir = parse_direction(row[*dir_col]);
      if (!dir) {
        throw Error(ErrorCode::kParseError, "direction must be empty, 'uv' or 'vu'",
                    edges.where(edges.lines[r]));
      }
      d.direction = *dir;
    }
    decls.push_back(std::move(d));
  }

  try {
    return build_network(std::move(records), decls, manifest.attributes);
  } catch (const Error& e) {
    if (!e.item()) throw;
    const bool edge_error = e.code() == ErrorCode::kUnknownEndpoint || e.code() == ErrorCode::kSelfLoop;
    const Table& t = edge_error ? edges : nodes;
    throw Error(e.code(), e.what(), t.where(t.lines.at(*e.item())), e.item());
  }
}

// --- network & partition -----------------------------------------------------

Json to_json(const Network& net) {
  Json schema = Json::object();
  for (const auto& [name, t] : net.schema()) schema[name] = type_name(t);
  Json nodes = Json::array();
  for (const auto& n : net.nodes()) {
    Json attrs = Json::object();
    for (const auto& [name, v] : n.attributes) {
      if (const auto* s = std::get_if<std::string>(&v)) attrs[name] = *s;
      else if (const auto* i = std::get_if<std::int64_t>(&v)) attrs[name] = *i;
    }
    nodes.push_back({{"id", n.id}, {"attributes", attrs}});
  }
  Json edges = Json::array();
  for (const auto& e : net.edges()) {
    edges.push_back({{"u", net.node(e.u).id},
                     {"v", net.node(e.v).id},
                     {"direction", direction_name(e.direction)}});
  }
  return versioned({{"kind", "network"}, {"schema", schema}, {"nodes", nodes}, {"edges", edges}});
}

Network network_from_json(const Json& j) {
  check_version(j, "network");
  try {
    AttributeSchema schema;
    for (const auto& [name, t] : j.at("schema").items()) schema.emplace(name, parse_type(t.get<std::string>()));
    std::vector<NodeRecord> nodes;
    for (const auto& n : j.at("nodes")) {
      NodeRecord r;
      r.id = n.at("id").get<std::string>();
      for (const auto& [name, v] : n.at("attributes").items()) {
        if (v.is_string()) r.attributes.emplace(name, v.get<std::string>());
        else if (v.is_number_integer()) r.attributes.emplace(name, v.get<std::int64_t>());
      }
      nodes.push_back(std::move(r));
    }
    std::vector<EdgeDeclaration> edges;
    for (const auto& e : j.at("edges")) {
      auto dir = parse_direction(e.value("direction", std::string{}));
      if (!dir) throw Error(ErrorCode::kParseError, "bad edge direction");
      edges.push_back({e.at("u").get<std::string>(), e.at("v").get<std::string>(), *dir});
    }
    return build_network(std::move(nodes), edges, schema);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed network JSON: ") + e.what());
  }
}

Json to_json(const Network& net, const Partition& p) {
  Json assignment = Json::object();
  for (NodeIndex v = 0; v < p.assignment.size(); ++v) assignment[net.node(v).id] = p.assignment[v];
  return versioned({{"kind", "partition"},
                    {"k", p.k},
                    {"modularity", p.modularity},
                    {"sizes", p.sizes()},
                    {"fingerprint", hex64(p.fingerprint())},
                    {"assignment", assignment}});
}

Partition partition_from_json(const Network& net, const Json& j) {
  check_version(j, "partition");
  try {
    const Json& a = j.at("assignment");
    if (a.size() != net.node_count()) {
      throw Error(ErrorCode::kSchemaMismatch, "partition does not cover the network");
    }
    std::vector<ClusterId> assignment(net.node_count());
    for (const auto& [id, c] : a.items()) assignment[net.index_of(id)] = c.get<ClusterId>();
    Partition p = canonical_partition(assignment);
    if (p.assignment != assignment || p.k != j.at("k").get<ClusterId>()) {
      throw Error(ErrorCode::kSchemaMismatch, "partition cluster ids are not canonical");
    }
    p.modularity = j.at("modularity").get<double>();
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed partition JSON: ") + e.what());
  }
}

Json to_json(const HierarchyStep& step) {
  return {{"kind", step.kind == StepKind::kRefine ? "refine" : "coarsen"},
          {"parent", hex64(step.parent)},
          {"child", hex64(step.child)},
          {"affected", step.affected}};
}

Json to_json(const ClusterGraph& cg) {
  Json nodes = Json::array();
  for (std::size_t c = 0; c < cg.cluster_count(); ++c) {
    nodes.push_back({{"cluster", c},
                     {"size", cg.sizes[c]},
                     {"internal_edges", cg.internal_edges[c]},
                     {"total_degree", cg.total_degree[c]}});
  }
  Json edges = Json::array();
  for (const auto& e : cg.edges) edges.push_back({{"a", e.a}, {"b", e.b}, {"weight", e.weight}});
  return {{"nodes", nodes}, {"edges", edges}};
}

// --- analysis artifacts ------------------------------------------------------

Json to_json(const NullModelSummary& s) {
  return versioned({{"kind", "null_model"},
                    {"replicates", s.replicates()},
                    {"replicate_modularity", s.replicate_modularity},
                    {"threshold", s.threshold},
                    {"degree_fingerprint", hex64(s.degree_fingerprint)},
                    {"seed", s.seed},
                    {"swaps_per_edge", s.swaps_per_edge}});
}

NullModelSummary null_summary_from_json(const Json& j) {
  check_version(j, "null model");
  try {
    NullModelSummary s;
    s.replicate_modularity = j.at("replicate_modularity").get<std::vector<double>>();
    s.threshold = j.at("threshold").get<double>();
    s.degree_fingerprint = std::stoull(j.at("degree_fingerprint").get<std::string>(), nullptr, 16);
    s.seed = j.at("seed").get<std::uint64_t>();
    s.swaps_per_edge = j.at("swaps_per_edge").get<std::size_t>();
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed null model JSON: ") + e.what());
  }
}

Json to_json(const TestOverlay& o) {
  Json clusters = Json::array();
  for (const auto& c : o.clusters) {
    Json residuals = Json::object();
    for (const auto& [k, r] : c.residuals) residuals[k] = r;
    clusters.push_back({{"cluster", c.cluster},
                        {"n", c.n},
                        {"statistic", c.statistic},
                        {"df", c.df},
                        {"p_value", c.p_value},
                        {"residuals", residuals},
                        {"low_count", c.low_count}});
  }
  return versioned({{"kind", "test_overlay"},
                    {"attribute", o.attribute},
                    {"global",
                     {{"categories", o.global.categories},
                      {"counts", o.global.counts},
                      {"total", o.global.total}}},
                    {"clusters", clusters}});
}

TestOverlay overlay_from_json(const Json& j) {
  check_version(j, "overlay");
  try {
    TestOverlay o;
    o.attribute = j.at("attribute").get<std::string>();
    o.global.attribute = o.attribute;
    o.global.categories = j.at("global").at("categories").get<std::vector<std::string>>();
    o.global.counts = j.at("global").at("counts").get<std::vector<std::uint64_t>>();
    o.global.total = j.at("global").at("total").get<std::uint64_t>();
    for (const auto& c : j.at("clusters")) {
      ClusterTest t;
      t.cluster = c.at("cluster").get<ClusterId>();
      t.n = c.at("n").get<std::uint64_t>();
      t.statistic = c.at("statistic").get<double>();
      t.df = c.at("df").get<int>();
      t.p_value = c.at("p_value").get<double>();
      t.residuals = c.at("residuals").get<std::map<std::string, double>>();
      t.low_count = c.at("low_count").get<bool>();
      o.clusters.push_back(std::move(t));
    }
    return o;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed overlay JSON: ") + e.what());
  }
}

Json to_json(const GeodesicTable& t) {
  Json mean = Json::array(), pairs = Json::array(), total = Json::array();
  for (const auto& row : t.cells) {
    Json m = Json::array(), p = Json::array(), d = Json::array();
    for (const auto& c : row) {
      m.push_back(cell_mean(c));
      p.push_back(c.pairs);
      d.push_back(c.total_distance);
    }
    mean.push_back(m);
    pairs.push_back(p);
    total.push_back(d);
  }
  return versioned({{"kind", "geodesic_table"},
                    {"labels", t.labels},
                    {"mean", mean},
                    {"pairs", pairs},
                    {"total_distance", total},
                    {"global",
                     {{"mean", cell_mean(t.global)},
                      {"pairs", t.global.pairs},
                      {"total_distance", t.global.total_distance}}}});
}

GeodesicTable geodesic_table_from_json(const Json& j) {
  check_version(j, "geodesic table");
  try {
    GeodesicTable t;
    t.labels = j.at("labels").get<std::vector<std::string>>();
    const std::size_t L = t.labels.size();
    t.cells.assign(L, std::vector<GeodesicCell>(L));
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = 0; b < L; ++b) {
        t.cells[a][b] = cell_from(j.at("mean").at(a).at(b), j.at("pairs").at(a).at(b),
                                  j.at("total_distance").at(a).at(b));
      }
    }
    const Json& g = j.at("global");
    t.global = cell_from(g.at("mean"), g.at("pairs"), g.at("total_distance"));
    return t;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed geodesic table JSON: ") + e.what());
  }
}

Json to_json(const YearlyTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    Json counts = Json::object(), shares = Json::object();
    for (const auto& [cls, n] : r.counts) {
      counts[cls] = n;
      shares[cls] = r.share(cls);
    }
    rows.push_back({{"year", r.year}, {"total", r.total}, {"counts", counts}, {"shares", shares}});
  }
  return versioned({{"kind", "yearly_table"},
                    {"year_attribute", t.year_attribute},
                    {"classes", t.classes},
                    {"rows", rows}});
}

Json to_json(const LayoutResult& layout) {
  Json positions = Json::array();
  for (const auto& p : layout.positions) positions.push_back({p.x, p.y});
  return versioned({{"kind", "layout"},
                    {"seed", layout.seed},
                    {"iterations", layout.iterations},
                    {"box", {layout.box.x0, layout.box.y0, layout.box.x1, layout.box.y1}},
                    {"positions", positions},
                    {"radius", layout.radius},
                    {"thickness", layout.thickness}});
}

LayoutResult layout_from_json(const Json& j) {
  check_version(j, "layout");
  try {
    LayoutResult l;
    l.seed = j.at("seed").get<std::uint64_t>();
    l.iterations = j.at("iterations").get<std::size_t>();
    const Json& b = j.at("box");
    l.box = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()};
    for (const auto& p : j.at("positions")) l.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    l.radius = j.at("radius").get<std::vector<double>>();
    l.thickness = j.at("thickness").get<std::vector<double>>();
    return l;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed layout JSON: ") + e.what());
  }
}

Json to_json(const StyledLayout& styled, const ClusterGraph& cg) {
  const LayoutResult& l = styled.layout;
  Json nodes = Json::array();
  for (std::size_t c = 0; c < l.positions.size(); ++c) {
    const NodeStyle& st = styled.styles[c];
    nodes.push_back({{"cluster", c},
                     {"size", cg.sizes.at(c)},
                     {"x", l.positions[c].x},
                     {"y", l.positions[c].y},
                     {"radius", l.radius[c]},
                     {"darkness", st.darkness},
                     {"shape", st.shape == Shape::kCircle ? "circle" : "square"},
                     {"p_value", st.p_value ? Json(*st.p_value) : Json(nullptr)},
                     {"residual", st.residual ? Json(*st.residual) : Json(nullptr)},
                     {"atypical", st.atypical},
                     {"low_count", st.low_count}});
  }
  Json edges = Json::array();
  for (std::size_t i = 0; i < cg.edges.size(); ++i) {
    edges.push_back({{"a", cg.edges[i].a},
                     {"b", cg.edges[i].b},
                     {"weight", cg.edges[i].weight},
                     {"thickness", l.thickness.at(i)}});
  }
  return {{"box", {l.box.x0, l.box.y0, l.box.x1, l.box.y1}},
          {"seed", l.seed},
          {"iterations", l.iterations},
          {"category", styled.category ? Json(*styled.category) : Json(nullptr)},
          {"alpha", styled.alpha},
          {"nodes", nodes},
          {"edges", edges}};
}

std::string geodesic_csv(const GeodesicTable& t) {
  std::string out = "label";
  for (const auto& l : t.labels) out += "," + csv_field(l);
  out += "\n";
  for (std::size_t a = 0; a < t.labels.size(); ++a) {
    out += csv_field(t.labels[a]);
    for (const auto& c : t.cells[a]) out += "," + (c.mean ? format_real(*c.mean) : std::string{});
    out += "\n";
  }
  out += "global," + (t.global.mean ? format_real(*t.global.mean) : std::string{});
  out += std::string(t.labels.empty() ? 0 : t.labels.size() - 1, ',') + "\n";
  return out;
}

std::string yearly_csv(const YearlyTable& t) {
  std::string out = "year,class,count,share\n";
  for (const auto& r : t.rows) {
    for (const auto& cls : t.classes) {
      auto it = r.counts.find(cls);
      const std::uint64_t n = it == r.counts.end() ? 0 : it->second;
      out += std::to_string(r.year) + "," + csv_field(cls) + "," + std::to_string(n) + "," +
             format_real(r.share(cls)) + "\n";
    }
  }
  return out;
}

std::string render_svg(const StyledLayout& styled, const ClusterGraph& cg) {
  const LayoutResult& l = styled.layout;
  double margin = 2.0;
  for (double r : l.radius) margin = std::max(margin, r + 2.0);
  const double x0 = l.box.x0 - margin, y0 = l.box.y0 - margin;
  const double w = l.box.x1 - l.box.x0 + 2 * margin, h = l.box.y1 - l.box.y0 + 2 * margin;
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << format_real(w)
      << "\" height=\"" << format_real(h) << "\" viewBox=\"" << format_real(x0) << " "
      << format_real(y0) << " " << format_real(w) << " " << format_real(h) << "\">\n";
  out << "<rect x=\"" << format_real(x0) << "\" y=\"" << format_real(y0) << "\" width=\""
      << format_real(w) << "\" height=\"" << format_real(h) << "\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < cg.edges.size(); ++i) {
    const auto& e = cg.edges[i];
    const Point& a = l.positions[e.a];
    const Point& b = l.positions[e.b];
    out << "<line class=\"meta-edge\" x1=\"" << format_real(a.x) << "\" y1=\"" << format_real(a.y)
        << "\" x2=\"" << format_real(b.x) << "\" y2=\"" << format_real(b.y)
        << "\" stroke=\"rgb(120,120,120)\" stroke-width=\"" << format_real(l.thickness[i])
        << "\"><title>" << e.a << "-" << e.b << ": " << e.weight << " edges</title></line>\n";
  }
  for (std::size_t c = 0; c < l.positions.size(); ++c) {
    const NodeStyle& st = styled.styles[c];
    const Point& p = l.positions[c];
    const double r = l.radius[c];
    std::string title = "cluster " + std::to_string(c) + ", n=" + std::to_string(cg.sizes[c]);
    if (st.p_value) title += ", p=" + format_real(*st.p_value);
    if (st.residual) title += ", residual=" + format_real(*st.residual);
    if (st.shape == Shape::kCircle) {
      out << "<circle class=\"cluster\" cx=\"" << format_real(p.x) << "\" cy=\"" << format_real(p.y)
          << "\" r=\"" << format_real(r) << "\"";
    } else {
      out << "<rect class=\"cluster\" x=\"" << format_real(p.x - r) << "\" y=\""
          << format_real(p.y - r) << "\" width=\"" << format_real(2 * r) << "\" height=\""
          << format_real(2 * r) << "\"";
    }
    out << " fill=\"" << gray(st.darkness) << "\" stroke=\"black\"><title>" << escape_xml(title)
        << "</title></" << (st.shape == Shape::kCircle ? "circle" : "rect") << ">\n";
  }
  out << "</svg>\n";
  return out.str();
}

// --- session -----------------------------------------------------------------

namespace {

StyledLayout current_styling(const SessionState& state) {
  const Snapshot& s = state.current();
  if (s.overlay) return style_overlay(s.layout, *s.overlay, s.overlay_category, state.alpha);
  return unstyled(s.layout);
}

}  // namespace

Json snapshot_payload(const SessionState& state) {
  const Snapshot& s = state.current();
  const Network& net = *state.network;
  const ClusterGraph cg = build_cluster_graph(net, s.partition);
  Json groups = Json::object();
  for (const auto& [c, label] : s.groups) groups[std::to_string(c)] = label;
  Json j{{"partition", to_json(net, s.partition)},
         {"cluster_graph", to_json(cg)},
         {"layout", to_json(current_styling(state), cg)},
         {"operation", s.operation},
         {"step", s.step ? to_json(*s.step) : Json(nullptr)},
         {"overlay", s.overlay ? to_json(*s.overlay) : Json(nullptr)},
         {"overlay_category", s.overlay_category ? Json(*s.overlay_category) : Json(nullptr)},
         {"groups", groups},
         {"group_geodesics", s.group_geodesics ? to_json(*s.group_geodesics) : Json(nullptr)},
         {"group_years", s.group_years ? to_json(*s.group_years) : Json(nullptr)}};
  if (state.global_null) {
    j["significant"] = is_significant(s.partition.modularity, *state.global_null);
  } else {
    j["significant"] = nullptr;
  }
  return j;
}

Json session_payload(const SessionState& state) {
  Json ops = Json::array();
  for (const auto& s : state.history) ops.push_back(s.operation);
  const Network& net = *state.network;
  return versioned({{"kind", "session"},
                    {"session", state.id},
                    {"dataset", state.dataset},
                    {"seed", state.seed},
                    {"alpha", state.alpha},
                    {"network",
                     {{"nodes", net.node_count()},
                      {"edges", net.edge_count()},
                      {"fingerprint", hex64(net.structure_hash())}}},
                    {"null_model", state.global_null ? to_json(*state.global_null) : Json(nullptr)},
                    {"history",
                     {{"cursor", state.cursor},
                      {"length", state.history.size()},
                      {"operations", ops},
                      {"can_undo", state.cursor > 0},
                      {"can_redo", state.cursor + 1 < state.history.size()}}},
                    {"state", snapshot_payload(state)}});
}

ExportKind parse_export_kind(std::string_view kind) {
  if (kind == "json") return ExportKind::kJson;
  if (kind == "svg") return ExportKind::kSvg;
  if (kind == "csv" || kind == "csv-tables") return ExportKind::kCsvTables;
  throw Error(ErrorCode::kInvalidConfig, "export kind must be json, svg or csv", std::string(kind));
}

std::string export_session(const SessionState& state, ExportKind kind) {
  if (state.history.empty() || !state.network) {
    throw Error(ErrorCode::kMissingArtifact, "session has no state to export", state.id);
  }
  switch (kind) {
    case ExportKind::kJson:
      return canonical_dump(session_payload(state));
    case ExportKind::kSvg: {
      const ClusterGraph cg = build_cluster_graph(*state.network, state.current().partition);
      return render_svg(current_styling(state), cg);
    }
    case ExportKind::kCsvTables: {
      const Snapshot& s = state.current();
      if (!s.group_geodesics) {
        throw Error(ErrorCode::kMissingArtifact, "no group tables computed yet", "group_geodesics");
      }
      std::string out = "# group_geodesics\n" + geodesic_csv(*s.group_geodesics);
      if (s.group_years) out += "# group_years\n" + yearly_csv(*s.group_years);
      return out;
    }
  }
  return {};
}

}  // namespace vmine
