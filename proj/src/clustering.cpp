#include "vmine/clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "vmine/error.hpp"
#include "vmine/random.hpp"

namespace vmine {
namespace {

constexpr ClusterId kNoCluster = std::numeric_limits<ClusterId>::max();

void check_covers(const Network& net, const Partition& p) {
  if (p.assignment.size() != net.node_count()) {
    throw Error(ErrorCode::kUnknownNodeId, "partition does not cover the network",
                std::to_string(p.assignment.size()) + " vs " + std::to_string(net.node_count()));
  }
}

// Gains below are dQ scaled by 2m^2, which keeps them integral:
//   merge a,b:        2m*w_ab - d_a*d_b
//   v joins X:        2m*w_vX - d_v*D_X
std::int64_t merge_gain(std::int64_t two_m, std::int64_t w, std::int64_t da, std::int64_t db) {
  return two_m * w - da * db;
}

struct Agglomeration {
  std::int64_t two_m;
  std::vector<std::int64_t> node_degree;
  std::vector<ClusterId> community;  // node -> cluster id in [0, n)
  std::vector<std::uint64_t> key;    // cluster id -> tie-break key
};

// Greedily merges the adjacent cluster pair with the largest positive gain
// until none is left. Returns true when at least one merge happened.
bool merge_phase(const Network& net, Agglomeration& st) {
  const std::size_t n = net.node_count();
  std::vector<std::int64_t> degree(n, 0);
  std::vector<bool> alive(n, false);
  std::vector<std::map<ClusterId, std::int64_t>> adj(n);
  for (NodeIndex v = 0; v < n; ++v) {
    degree[st.community[v]] += st.node_degree[v];
    alive[st.community[v]] = true;
  }
  for (const auto& e : net.edges()) {
    const ClusterId a = st.community[e.u], b = st.community[e.v];
    if (a != b) {
      ++adj[a][b];
      ++adj[b][a];
    }
  }
  std::vector<ClusterId> parent(n);
  std::iota(parent.begin(), parent.end(), ClusterId{0});

  bool merged_any = false;
  for (;;) {
    std::int64_t best = 0;
    ClusterId ba = kNoCluster, bb = kNoCluster;
    std::pair<std::uint64_t, std::uint64_t> best_key{};
    for (ClusterId a = 0; a < n; ++a) {
      if (!alive[a]) continue;
      for (auto it = adj[a].upper_bound(a); it != adj[a].end(); ++it) {
        const ClusterId b = it->first;
        const std::int64_t g = merge_gain(st.two_m, it->second, degree[a], degree[b]);
        if (g <= 0) continue;
        const std::pair<std::uint64_t, std::uint64_t> k{std::min(st.key[a], st.key[b]),
                                                  std::max(st.key[a], st.key[b])};
        if (g > best || (g == best && k < best_key)) {
          best = g;
          best_key = k;
          ba = a;
          bb = b;
        }
      }
    }
    if (ba == kNoCluster) break;
    merged_any = true;
    // absorb bb into ba
    for (const auto& [c, w] : adj[bb]) {
      if (c == ba) continue;
      adj[c].erase(bb);
      adj[c][ba] += w;
      adj[ba][c] += w;
    }
    adj[ba].erase(bb);
    adj[bb].clear();
    degree[ba] += degree[bb];
    st.key[ba] = std::min(st.key[ba], st.key[bb]);
    alive[bb] = false;
    parent[bb] = ba;
  }
  if (merged_any) {
    for (NodeIndex v = 0; v < n; ++v) {
      ClusterId c = st.community[v];
      while (parent[c] != c) c = parent[c];
      st.community[v] = c;
    }
  }
  return merged_any;
}

// Sweeps nodes in seed order, moving each to the neighboring cluster with
// the largest positive gain, until a sweep moves nothing.
bool move_phase(const Network& net, Agglomeration& st, const std::vector<NodeIndex>& order) {
  const std::size_t n = net.node_count();
  std::vector<std::int64_t> degree(n, 0);
  for (NodeIndex v = 0; v < n; ++v) degree[st.community[v]] += st.node_degree[v];

  std::vector<std::int64_t> links(n, 0);
  std::vector<ClusterId> touched;
  bool moved_any = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (NodeIndex v : order) {
      const ClusterId home = st.community[v];
      const std::int64_t dv = st.node_degree[v];
      touched.clear();
      for (NodeIndex u : net.neighbors(v)) {
        const ClusterId c = st.community[u];
        if (links[c] == 0) touched.push_back(c);
        ++links[c];
      }
      const std::int64_t stay = st.two_m * links[home] - dv * (degree[home] - dv);
      std::int64_t best = 0;
      ClusterId target = kNoCluster;
      for (ClusterId c : touched) {
        if (c == home) continue;
        const std::int64_t g = st.two_m * links[c] - dv * degree[c] - stay;
        if (g > best || (g == best && g > 0 && st.key[c] < st.key[target])) {
          best = g;
          target = c;
        }
      }
      for (ClusterId c : touched) links[c] = 0;
      if (target != kNoCluster) {
        degree[home] -= dv;
        degree[target] += dv;
        st.community[v] = target;
        moved = true;
        moved_any = true;
      }
    }
  }
  return moved_any;
}

}  // namespace

std::vector<std::vector<NodeIndex>> Partition::members() const {
  std::vector<std::vector<NodeIndex>> out(k);
  for (NodeIndex v = 0; v < assignment.size(); ++v) out[assignment[v]].push_back(v);
  return out;
}

std::vector<std::size_t> Partition::sizes() const {
  std::vector<std::size_t> out(k, 0);
  for (ClusterId c : assignment) ++out[c];
  return out;
}

std::uint64_t Partition::fingerprint() const {
  Fnv1a h;
  h.add_value<std::uint64_t>(assignment.size());
  for (ClusterId c : assignment) h.add_value(c);
  return h.value();
}

Partition canonical_partition(std::vector<ClusterId> assignment) {
  std::map<ClusterId, ClusterId> renumber;
  for (ClusterId& c : assignment) {
    auto [it, inserted] = renumber.emplace(c, static_cast<ClusterId>(renumber.size()));
    c = it->second;
  }
  Partition p;
  p.assignment = std::move(assignment);
  p.k = static_cast<ClusterId>(renumber.size());
  return p;
}

Partition make_partition(const Network& net, std::vector<ClusterId> assignment) {
  Partition p = canonical_partition(std::move(assignment));
  check_covers(net, p);
  if (net.edge_count() > 0) p.modularity = modularity(net, p);
  return p;
}

std::size_t ClusterGraph::weight(ClusterId a, ClusterId b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{a, b},
                             [](const MetaEdge& e, const std::pair<ClusterId, ClusterId>& k) {
                               return std::pair{e.a, e.b} < k;
                             });
  return (it != edges.end() && it->a == a && it->b == b) ? it->weight : 0;
}

ClusterGraph build_cluster_graph(const Network& net, const Partition& p) {
  check_covers(net, p);
  ClusterGraph cg;
  cg.sizes.assign(p.k, 0);
  cg.internal_edges.assign(p.k, 0);
  cg.total_degree.assign(p.k, 0);
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    ++cg.sizes[p.assignment[v]];
    cg.total_degree[p.assignment[v]] += net.degree(v);
  }
  std::map<std::pair<ClusterId, ClusterId>, std::size_t> crossing;
  for (const auto& e : net.edges()) {
    ClusterId a = p.assignment[e.u], b = p.assignment[e.v];
    if (a == b) {
      ++cg.internal_edges[a];
    } else {
      if (a > b) std::swap(a, b);
      ++crossing[{a, b}];
    }
  }
  cg.edges.reserve(crossing.size());
  for (const auto& [ab, w] : crossing) cg.edges.push_back({ab.first, ab.second, w});
  return cg;
}

double modularity(const ClusterGraph& cg, std::size_t m) {
  if (m == 0) throw Error(ErrorCode::kEmptyGraph, "modularity is undefined without edges");
  const double md = static_cast<double>(m);
  double q = 0.0;
  for (std::size_t c = 0; c < cg.cluster_count(); ++c) {
    const double frac = static_cast<double>(cg.total_degree[c]) / (2.0 * md);
    q += static_cast<double>(cg.internal_edges[c]) / md - frac * frac;
  }
  return q;
}

double modularity(const Network& net, const Partition& p) {
  if (net.edge_count() == 0) {
    throw Error(ErrorCode::kEmptyGraph, "modularity is undefined without edges");
  }
  return modularity(build_cluster_graph(net, p), net.edge_count());
}

double delta_q_merge(const ClusterGraph& cg, std::size_t m, ClusterId a, ClusterId b) {
  if (a >= cg.cluster_count() || b >= cg.cluster_count() || a == b) {
    throw Error(ErrorCode::kUnknownCluster, "merge needs two distinct existing clusters",
                std::to_string(a) + "," + std::to_string(b));
  }
  if (m == 0) throw Error(ErrorCode::kEmptyGraph, "modularity is undefined without edges");
  const double md = static_cast<double>(m);
  const double fa = static_cast<double>(cg.total_degree[a]) / (2.0 * md);
  const double fb = static_cast<double>(cg.total_degree[b]) / (2.0 * md);
  return static_cast<double>(cg.weight(a, b)) / md - 2.0 * fa * fb;
}

Partition cluster(const Network& net, std::uint64_t seed) {
  if (net.edge_count() == 0) {
    throw Error(ErrorCode::kEmptyGraph, "cannot cluster a graph without edges");
  }
  const std::size_t n = net.node_count();
  Rng rng(seed);
  std::vector<NodeIndex> order(n);
  std::iota(order.begin(), order.end(), NodeIndex{0});
  rng.shuffle(order);

  Agglomeration st;
  st.two_m = 2 * static_cast<std::int64_t>(net.edge_count());
  st.node_degree.resize(n);
  st.community.resize(n);
  st.key.resize(n);
  for (NodeIndex v = 0; v < n; ++v) {
    st.node_degree[v] = static_cast<std::int64_t>(net.degree(v));
    st.community[v] = v;
  }
  for (std::size_t i = 0; i < n; ++i) st.key[order[i]] = i;

  do {
    merge_phase(net, st);
  } while (move_phase(net, st, order));

  return make_partition(net, std::move(st.community));
}

SteppedPartition coarsen(const Network& net, const Partition& p, std::size_t target_k) {
  check_covers(net, p);
  if (target_k < 1 || target_k >= p.k) {
    throw Error(ErrorCode::kBadTarget, "coarsening target must satisfy 1 <= k < current k",
                "target " + std::to_string(target_k) + ", current " + std::to_string(p.k));
  }
  if (net.edge_count() == 0) {
    throw Error(ErrorCode::kEmptyGraph, "cannot coarsen on a graph without edges");
  }
  const ClusterGraph cg = build_cluster_graph(net, p);
  const std::int64_t two_m = 2 * static_cast<std::int64_t>(net.edge_count());
  std::vector<std::int64_t> degree(cg.total_degree.begin(), cg.total_degree.end());
  std::vector<std::map<ClusterId, std::int64_t>> adj(p.k);
  for (const auto& e : cg.edges) {
    adj[e.a][e.b] = static_cast<std::int64_t>(e.weight);
    adj[e.b][e.a] = static_cast<std::int64_t>(e.weight);
  }
  std::vector<bool> alive(p.k, true);
  std::vector<ClusterId> parent(p.k);
  std::iota(parent.begin(), parent.end(), ClusterId{0});
  std::set<ClusterId> affected;

  for (std::size_t k = p.k; k > target_k; --k) {
    ClusterId ba = kNoCluster, bb = kNoCluster;
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    for (ClusterId a = 0; a < p.k; ++a) {
      if (!alive[a]) continue;
      for (auto it = adj[a].upper_bound(a); it != adj[a].end(); ++it) {
        const std::int64_t g = merge_gain(two_m, it->second, degree[a], degree[it->first]);
        if (g > best) {  // scan order is (a, b) ascending, so the first max wins ties
          best = g;
          ba = a;
          bb = it->first;
        }
      }
    }
    if (ba == kNoCluster) {
      // No adjacent pair left (disconnected metagraph): fall back to any pair.
      for (ClusterId a = 0; a < p.k; ++a) {
        if (!alive[a]) continue;
        for (ClusterId b = a + 1; b < p.k; ++b) {
          if (!alive[b]) continue;
          const std::int64_t g = merge_gain(two_m, 0, degree[a], degree[b]);
          if (g > best) {
            best = g;
            ba = a;
            bb = b;
          }
        }
      }
    }
    for (const auto& [c, w] : adj[bb]) {
      if (c == ba) continue;
      adj[c].erase(bb);
      adj[c][ba] += w;
      adj[ba][c] += w;
    }
    adj[ba].erase(bb);
    adj[bb].clear();
    degree[ba] += degree[bb];
    alive[bb] = false;
    parent[bb] = ba;
    affected.insert(ba);
    affected.insert(bb);
  }

  std::vector<ClusterId> assignment(p.assignment);
  for (ClusterId& c : assignment) {
    while (parent[c] != c) c = parent[c];
  }
  Partition child = make_partition(net, std::move(assignment));
  HierarchyStep step{StepKind::kCoarsen, p.fingerprint(), child.fingerprint(),
                     {affected.begin(), affected.end()}};
  return {std::move(child), std::move(step)};
}

SteppedPartition refine(const Network& net, const Partition& p,
                        const std::vector<ClusterId>& targets, std::uint64_t seed) {
  check_covers(net, p);
  std::set<ClusterId> wanted(targets.begin(), targets.end());
  for (ClusterId c : wanted) {
    if (c >= p.k) {
      throw Error(ErrorCode::kUnknownCluster, "no such cluster", std::to_string(c));
    }
  }
  std::vector<ClusterId> assignment(p.assignment);
  std::vector<ClusterId> affected;
  const auto members = p.members();
  ClusterId next_id = p.k;
  for (ClusterId c : wanted) {
    const Network sub = induced_subgraph(net, members[c]);
    if (sub.edge_count() == 0) continue;
    const Partition sp = cluster(sub, seed);
    if (sp.k < 2) continue;
    affected.push_back(c);
    const ClusterId base = next_id;
    next_id += sp.k - 1;
    for (std::size_t i = 0; i < members[c].size(); ++i) {
      const ClusterId s = sp.assignment[i];
      if (s > 0) assignment[members[c][i]] = base + s - 1;
    }
  }
  Partition child = affected.empty() ? p : make_partition(net, std::move(assignment));
  HierarchyStep step{StepKind::kRefine, p.fingerprint(), child.fingerprint(), affected};
  return {std::move(child), std::move(step)};
}

Partition merge_into_groups(const Network& net, const Partition& p,
                            const std::map<ClusterId, std::string>& groups,
                            std::vector<std::string>* labels_out) {
  check_covers(net, p);
  std::map<std::string, ClusterId> label_ids;
  std::vector<ClusterId> raw(p.k);
  for (ClusterId c = 0; c < p.k; ++c) {
    auto it = groups.find(c);
    if (it == groups.end()) {
      throw Error(ErrorCode::kUnlabeledCluster, "cluster has no group label", std::to_string(c));
    }
    auto [lit, inserted] =
        label_ids.emplace(it->second, static_cast<ClusterId>(label_ids.size()));
    raw[c] = lit->second;
  }
  for (const auto& [c, label] : groups) {
    if (c >= p.k) throw Error(ErrorCode::kUnknownCluster, "no such cluster", std::to_string(c));
  }
  std::vector<ClusterId> assignment(p.assignment.size());
  for (std::size_t v = 0; v < assignment.size(); ++v) assignment[v] = raw[p.assignment[v]];
  Partition out = make_partition(net, assignment);
  if (labels_out) {
    std::vector<std::string> by_raw(label_ids.size());
    for (const auto& [label, id] : label_ids) by_raw[id] = label;
    labels_out->assign(out.k, {});
    for (std::size_t v = 0; v < assignment.size(); ++v) {
      (*labels_out)[out.assignment[v]] = by_raw[assignment[v]];
    }
  }
  return out;
}

}  // namespace vmine
