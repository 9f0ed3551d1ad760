#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace vmine {

using NodeIndex = std::uint32_t;

enum class AttributeType { kCategorical, kInteger };

/// monostate = missing value.
using AttributeValue = std::variant<std::monostate, std::string, std::int64_t>;
using AttributeSchema = std::map<std::string, AttributeType, std::less<>>;

struct NodeRecord {
  std::string id;
  std::map<std::string, AttributeValue, std::less<>> attributes;

  /// Missing when the attribute is absent or explicitly empty.
  const AttributeValue& attribute(std::string_view name) const;

  friend bool operator==(const NodeRecord&, const NodeRecord&) = default;
};

enum class Direction : std::uint8_t { kNone, kUToV, kVToU };

/// Raw edge as declared in an input table, by node id.
struct EdgeDeclaration {
  std::string u;
  std::string v;
  Direction direction = Direction::kNone;
};

/// Stored edge; always u < v, direction relative to that orientation.
struct Edge {
  NodeIndex u;
  NodeIndex v;
  Direction direction = Direction::kNone;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected simple graph with attribute-labeled nodes. Immutable once built.
///
/// Nodes are stored sorted by id (byte order), so a node index comparison is
/// an id comparison and every "smallest id" tie-break is a smallest-index one.
class Network {
 public:
  Network() = default;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const NodeRecord& node(NodeIndex i) const { return nodes_[i]; }
  std::span<const NodeRecord> nodes() const { return nodes_; }
  std::span<const Edge> edges() const { return edges_; }
  const AttributeSchema& schema() const { return schema_; }

  std::optional<NodeIndex> find(std::string_view id) const;
  /// Throws UnknownNodeId.
  NodeIndex index_of(std::string_view id) const;

  /// Sorted ascending.
  std::span<const NodeIndex> neighbors(NodeIndex i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  std::size_t degree(NodeIndex i) const { return offsets_[i + 1] - offsets_[i]; }
  bool has_edge(NodeIndex a, NodeIndex b) const;

  /// Fingerprint of node ids and edge structure (attributes excluded).
  std::uint64_t structure_hash() const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.schema_ == b.schema_;
  }

 private:
  friend Network build_network(std::vector<NodeRecord>, std::span<const EdgeDeclaration>,
                               std::optional<AttributeSchema>);
  friend Network with_edges(const Network&, std::vector<Edge>);

  void index_adjacency();

  std::vector<NodeRecord> nodes_;
  std::vector<Edge> edges_;
  AttributeSchema schema_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeIndex> adjacency_;
};

/// Builds a network from raw declarations. Duplicate unordered pairs collapse
/// (direction kept from the first oriented declaration). When `schema` is
/// absent it is inferred from the values present.
///
/// Errors: DuplicateNodeId, UnknownEndpoint, SelfLoop, SchemaMismatch; the
/// error's item() is the offending node or edge declaration index.
Network build_network(std::vector<NodeRecord> nodes, std::span<const EdgeDeclaration> edges,
                      std::optional<AttributeSchema> schema = std::nullopt);

/// Same nodes and schema, replaced edge set (must already be simple, u < v).
Network with_edges(const Network& net, std::vector<Edge> edges);

/// Edge declarations reproducing `net` when fed back to build_network.
std::vector<EdgeDeclaration> edge_declarations(const Network& net);

/// Sorted node sets, largest first; ties by smallest contained id.
std::vector<std::vector<NodeIndex>> connected_components(const Network& net);

/// Subgraph on `keep` (any order, duplicates ignored). Node i of the result is
/// the i-th smallest kept index. Throws UnknownNodeId for out-of-range entries.
Network induced_subgraph(const Network& net, std::span<const NodeIndex> keep);
Network induced_subgraph_by_id(const Network& net, std::span<const std::string> keep);

/// One entry per node in index order.
std::vector<std::size_t> degree_sequence(const Network& net);

}  // namespace vmine
