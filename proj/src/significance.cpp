#include "vmine/significance.hpp"

#include <algorithm>
#include <thread>
#include <unordered_set>

#include "vmine/error.hpp"
#include "vmine/random.hpp"

namespace vmine {
namespace {

std::uint64_t pair_key(NodeIndex a, NodeIndex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

double replicate_modularity(const Network& net, std::uint64_t seed, std::size_t i,
                            std::size_t swaps) {
  const std::uint64_t s = mix_seed(seed, i);
  const Network shuffled = rewire(net, s, swaps);
  return cluster(shuffled, s).modularity;
}

}  // namespace

Network rewire(const Network& net, std::uint64_t seed, std::size_t swaps_per_edge) {
  const std::size_t m = net.edge_count();
  if (m < 2) {
    throw Error(ErrorCode::kTooFewEdges, "rewiring needs at least two edges",
                std::to_string(m));
  }
  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  edges.reserve(m);
  std::unordered_set<std::uint64_t> present;
  present.reserve(2 * m);
  for (const auto& e : net.edges()) {
    edges.emplace_back(e.u, e.v);
    present.insert(pair_key(e.u, e.v));
  }

  Rng rng(seed);
  const std::size_t attempts = swaps_per_edge * m;
  for (std::size_t t = 0; t < attempts; ++t) {
    const std::size_t i = rng.below(m);
    std::size_t j = rng.below(m - 1);
    if (j >= i) ++j;
    auto [a, b] = edges[i];
    auto [c, d] = edges[j];
    // (a,b),(c,d) -> (a,d),(c,b)  or  (a,c),(b,d)
    if (rng.below(2) == 1) std::swap(c, d);
    if (a == d || c == b) continue;
    const std::uint64_t k1 = pair_key(a, d), k2 = pair_key(c, b);
    if (present.count(k1) || present.count(k2)) continue;
    present.erase(pair_key(a, b));
    present.erase(pair_key(c, d));
    present.insert(k1);
    present.insert(k2);
    edges[i] = {a, d};
    edges[j] = {c, b};
  }

  std::vector<Edge> out;
  out.reserve(m);
  for (auto [u, v] : edges) {
    if (u > v) std::swap(u, v);
    out.push_back({u, v, Direction::kNone});
  }
  return with_edges(net, std::move(out));
}

std::uint64_t degree_fingerprint(const Network& net) {
  Fnv1a h;
  h.add_value<std::uint64_t>(net.node_count());
  for (NodeIndex v = 0; v < net.node_count(); ++v) h.add_value<std::uint64_t>(net.degree(v));
  return h.value();
}

NullModelSummary null_threshold(const Network& net, std::uint64_t seed,
                                const NullOptions& options) {
  if (options.replicates < 1) {
    throw Error(ErrorCode::kInvalidConfig, "null model needs at least one replicate", "R");
  }
  if (net.edge_count() == 0) {
    throw Error(ErrorCode::kEmptyGraph, "null model is undefined without edges");
  }
  if (net.edge_count() < 2) {
    throw Error(ErrorCode::kTooFewEdges, "rewiring needs at least two edges");
  }
  NullModelSummary s;
  s.seed = seed;
  s.swaps_per_edge = options.swaps_per_edge;
  s.degree_fingerprint = degree_fingerprint(net);
  s.replicate_modularity.assign(options.replicates, 0.0);

  const std::size_t workers = std::clamp<std::size_t>(options.threads, 1, options.replicates);
  if (workers == 1) {
    for (std::size_t i = 0; i < options.replicates; ++i) {
      s.replicate_modularity[i] = replicate_modularity(net, seed, i, options.swaps_per_edge);
    }
  } else {
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < options.replicates; i += workers) {
            s.replicate_modularity[i] =
                replicate_modularity(net, seed, i, options.swaps_per_edge);
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }
  s.threshold = *std::max_element(s.replicate_modularity.begin(), s.replicate_modularity.end());
  return s;
}

GateVerdict gate_refinement(const Network& net, const Partition& p, ClusterId target,
                            std::uint64_t seed, const NullOptions& options) {
  if (target >= p.k) {
    throw Error(ErrorCode::kUnknownCluster, "no such cluster", std::to_string(target));
  }
  std::vector<NodeIndex> members;
  for (NodeIndex v = 0; v < p.assignment.size(); ++v) {
    if (p.assignment[v] == target) members.push_back(v);
  }
  const Network sub = induced_subgraph(net, members);
  GateVerdict verdict;
  if (sub.edge_count() < 2) {
    verdict.sub_partition = canonical_partition(std::vector<ClusterId>(sub.node_count(), 0));
    return verdict;
  }
  verdict.evaluated = true;
  verdict.sub_partition = cluster(sub, seed);
  verdict.summary = null_threshold(sub, seed, options);
  verdict.accepted =
      verdict.sub_partition.k >= 2 && is_significant(verdict.sub_partition.modularity,
                                                     verdict.summary);
  return verdict;
}

}  // namespace vmine
