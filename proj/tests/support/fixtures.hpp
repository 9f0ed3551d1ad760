#pragma once

// Small graphs and seeded generators shared by the unit and acceptance suites.

#include <string>
#include <utility>
#include <vector>

#include "vmine/network.hpp"
#include "vmine/random.hpp"

namespace vmine::testing {

/// Zero-padded ids so byte order equals numeric order ("n00", "n01", ...).
inline std::string node_name(std::size_t i) {
  std::string digits = std::to_string(i);
  return "n" + std::string(digits.size() < 3 ? 3 - digits.size() : 0, '0') + digits;
}

inline Network graph_from_pairs(std::size_t n, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<NodeRecord> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back({node_name(i), {}});
  std::vector<EdgeDeclaration> edges;
  for (auto [a, b] : pairs) {
    edges.push_back({node_name(static_cast<std::size_t>(a)), node_name(static_cast<std::size_t>(b))});
  }
  return build_network(std::move(nodes), edges);
}

inline Network triangle() { return graph_from_pairs(3, {{0, 1}, {1, 2}, {0, 2}}); }

inline Network path3() { return graph_from_pairs(3, {{0, 1}, {1, 2}}); }

inline Network two_triangles() {
  return graph_from_pairs(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

inline Network two_triangles_bridge() {
  return graph_from_pairs(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}

/// Three triangles joined in a chain by single bridges.
inline Network clique_chain3() {
  return graph_from_pairs(9, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5},
                              {6, 7}, {7, 8}, {6, 8}, {2, 3}, {5, 6}});
}

inline Network clique(std::size_t n) {
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(int(i), int(j));
  }
  return graph_from_pairs(n, pairs);
}

/// G(n, p) with the given seed.
inline Network random_graph(std::size_t n, double p, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rng.unit() < p) pairs.emplace_back(int(i), int(j));
    }
  }
  return graph_from_pairs(n, pairs);
}

/// Two planted blocks of `block` nodes: nodes [0, block) and [block, 2*block).
inline Network planted_two_blocks(std::size_t block, double p_in, double p_out,
                                  std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::pair<int, int>> pairs;
  const std::size_t n = 2 * block;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same = (i < block) == (j < block);
      if (rng.unit() < (same ? p_in : p_out)) pairs.emplace_back(int(i), int(j));
    }
  }
  return graph_from_pairs(n, pairs);
}

/// Two K5s joined by one bridge. Nodes carry "kind" (mostly x in the first
/// clique, mostly y in the second), a constant "flat" and an integer "year".
inline Network labeled_cliques() {
  std::vector<std::pair<int, int>> pairs;
  for (int base : {0, 5}) {
    for (int i = 0; i < 5; ++i) {
      for (int j = i + 1; j < 5; ++j) pairs.emplace_back(base + i, base + j);
    }
  }
  pairs.emplace_back(4, 5);
  const char* kinds[] = {"x", "x", "x", "x", "y", "y", "y", "y", "y", "x"};
  std::vector<NodeRecord> nodes;
  for (int i = 0; i < 10; ++i) {
    NodeRecord r{node_name(std::size_t(i)), {}};
    r.attributes["kind"] = std::string(kinds[i]);
    r.attributes["flat"] = std::string("same");
    r.attributes["year"] = std::int64_t{2000 + i % 3};
    nodes.push_back(std::move(r));
  }
  std::vector<EdgeDeclaration> edges;
  for (auto [a, b] : pairs) edges.push_back({node_name(std::size_t(a)), node_name(std::size_t(b))});
  return build_network(std::move(nodes), edges);
}

}  // namespace vmine::testing
