#include "vmine/network.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "vmine/error.hpp"
#include "vmine/random.hpp"

namespace vmine {
namespace {

const AttributeValue kMissing{};

std::uint64_t pair_key(NodeIndex a, NodeIndex b) {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

AttributeType type_of(const AttributeValue& v) {
  return std::holds_alternative<std::int64_t>(v) ? AttributeType::kInteger
                                                 : AttributeType::kCategorical;
}

AttributeSchema resolve_schema(const std::vector<NodeRecord>& nodes,
                               const std::vector<std::size_t>& input_pos,
                               std::optional<AttributeSchema> declared) {
  const bool infer = !declared.has_value();
  AttributeSchema schema = declared.value_or(AttributeSchema{});
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (const auto& [name, value] : nodes[i].attributes) {
      if (std::holds_alternative<std::monostate>(value)) continue;
      const AttributeType t = type_of(value);
      auto it = schema.find(name);
      if (it == schema.end()) {
        if (!infer) {
          throw Error(ErrorCode::kSchemaMismatch, "undeclared attribute '" + name + "'",
                      nodes[i].id, input_pos[i]);
        }
        schema.emplace(name, t);
      } else if (it->second != t) {
        throw Error(ErrorCode::kSchemaMismatch,
                    "attribute '" + name + "' has a value of the wrong type", nodes[i].id,
                    input_pos[i]);
      }
    }
  }
  return schema;
}

}  // namespace

const AttributeValue& NodeRecord::attribute(std::string_view name) const {
  auto it = attributes.find(name);
  return it == attributes.end() ? kMissing : it->second;
}

std::optional<NodeIndex> Network::find(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const NodeRecord& r, std::string_view k) { return r.id < k; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

NodeIndex Network::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw Error(ErrorCode::kUnknownNodeId, "unknown node id '" + std::string(id) + "'",
              std::string(id));
}

bool Network::has_edge(NodeIndex a, NodeIndex b) const {
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::uint64_t Network::structure_hash() const {
  Fnv1a h;
  h.add_value<std::uint64_t>(nodes_.size());
  for (const auto& n : nodes_) {
    h.add(n.id.data(), n.id.size());
    h.add_value<std::uint8_t>(0);
  }
  for (const auto& e : edges_) {
    h.add_value(e.u);
    h.add_value(e.v);
  }
  return h.value();
}

void Network::index_adjacency() {
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return pair_key(a.u, a.v) < pair_key(b.u, b.v); });
  offsets_.assign(nodes_.size() + 1, 0);
  for (const auto& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.assign(2 * edges_.size(), 0);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
  }
}

Network build_network(std::vector<NodeRecord> nodes, std::span<const EdgeDeclaration> edges,
                      std::optional<AttributeSchema> schema) {
  std::vector<std::size_t> order(nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return nodes[a].id < nodes[b].id; });

  Network net;
  net.nodes_.reserve(nodes.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    if (nodes[i].id.empty()) {
      throw Error(ErrorCode::kParseError, "empty node id", {}, i);
    }
    if (k > 0 && nodes[order[k - 1]].id == nodes[i].id) {
      throw Error(ErrorCode::kDuplicateNodeId, "duplicate node id '" + nodes[i].id + "'",
                  nodes[i].id, std::max(i, order[k - 1]));
    }
  }
  for (std::size_t i : order) net.nodes_.push_back(std::move(nodes[i]));
  net.schema_ = resolve_schema(net.nodes_, order, std::move(schema));

  std::unordered_map<std::uint64_t, std::size_t> seen;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& d = edges[i];
    auto a = net.find(d.u);
    auto b = net.find(d.v);
    if (!a || !b) {
      const std::string& missing = a ? d.v : d.u;
      throw Error(ErrorCode::kUnknownEndpoint, "edge references undeclared node '" + missing + "'",
                  missing, i);
    }
    if (*a == *b) {
      throw Error(ErrorCode::kSelfLoop, "self-loop on node '" + d.u + "'", d.u, i);
    }
    Direction dir = d.direction;
    NodeIndex u = *a, v = *b;
    if (u > v) {
      std::swap(u, v);
      if (dir == Direction::kUToV) dir = Direction::kVToU;
      else if (dir == Direction::kVToU) dir = Direction::kUToV;
    }
    auto [it, inserted] = seen.emplace(pair_key(u, v), net.edges_.size());
    if (inserted) {
      net.edges_.push_back({u, v, dir});
    } else if (net.edges_[it->second].direction == Direction::kNone) {
      net.edges_[it->second].direction = dir;
    }
  }
  net.index_adjacency();
  return net;
}

Network with_edges(const Network& net, std::vector<Edge> edges) {
  Network out;
  out.nodes_ = net.nodes_;
  out.schema_ = net.schema_;
  out.edges_ = std::move(edges);
  out.index_adjacency();
  return out;
}

std::vector<EdgeDeclaration> edge_declarations(const Network& net) {
  std::vector<EdgeDeclaration> out;
  out.reserve(net.edge_count());
  for (const auto& e : net.edges()) {
    out.push_back({net.node(e.u).id, net.node(e.v).id, e.direction});
  }
  return out;
}

std::vector<std::vector<NodeIndex>> connected_components(const Network& net) {
  const std::size_t n = net.node_count();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<NodeIndex>> comps;
  std::vector<NodeIndex> stack;
  for (NodeIndex s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<NodeIndex> comp;
    seen[s] = true;
    stack.push_back(s);
    while (!stack.empty()) {
      NodeIndex x = stack.back();
      stack.pop_back();
      comp.push_back(x);
      for (NodeIndex y : net.neighbors(x)) {
        if (!seen[y]) {
          seen[y] = true;
          stack.push_back(y);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  // Components were discovered in order of their smallest member, so a
  // stable sort by size keeps the smallest-id tie-break.
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return comps;
}

Network induced_subgraph(const Network& net, std::span<const NodeIndex> keep) {
  std::vector<NodeIndex> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  if (!kept.empty() && kept.back() >= net.node_count()) {
    throw Error(ErrorCode::kUnknownNodeId, "node index out of range",
                std::to_string(kept.back()));
  }
  constexpr NodeIndex kDropped = ~NodeIndex{0};
  std::vector<NodeIndex> remap(net.node_count(), kDropped);
  for (std::size_t i = 0; i < kept.size(); ++i) remap[kept[i]] = static_cast<NodeIndex>(i);

  std::vector<NodeRecord> nodes;
  nodes.reserve(kept.size());
  for (NodeIndex i : kept) nodes.push_back(net.node(i));
  std::vector<Edge> edges;
  for (const auto& e : net.edges()) {
    if (remap[e.u] != kDropped && remap[e.v] != kDropped) {
      edges.push_back({remap[e.u], remap[e.v], e.direction});
    }
  }
  Network base = build_network(std::move(nodes), {}, net.schema());
  return with_edges(base, std::move(edges));
}

Network induced_subgraph_by_id(const Network& net, std::span<const std::string> keep) {
  std::vector<NodeIndex> idx;
  idx.reserve(keep.size());
  for (const auto& id : keep) idx.push_back(net.index_of(id));
  return induced_subgraph(net, idx);
}

std::vector<std::size_t> degree_sequence(const Network& net) {
  std::vector<std::size_t> out(net.node_count());
  for (NodeIndex i = 0; i < out.size(); ++i) out[i] = net.degree(i);
  return out;
}

}  // namespace vmine
