#include "vmine/session.hpp"

#include <set>

#include "vmine/error.hpp"
#include "vmine/random.hpp"

namespace vmine {

Session::Session(std::string id, std::string dataset, std::shared_ptr<const Network> network,
                 SessionOptions options)
    : options_(std::move(options)) {
  state_.id = std::move(id);
  state_.dataset = std::move(dataset);
  state_.seed = options_.seed;
  state_.alpha = options_.alpha;
  state_.network = std::move(network);
  const Network& net = *state_.network;

  Snapshot root;
  root.partition = cluster(net, options_.seed);
  if (net.edge_count() >= 2) state_.global_null = null_threshold(net, options_.seed, options_.null);
  LayoutOptions lo;
  lo.iterations = options_.layout_iterations;
  root.layout = fr_layout(build_cluster_graph(net, root.partition),
                          mix_seed(options_.seed, root.partition.fingerprint()), lo);
  state_.history.push_back(std::move(root));
}

SessionState Session::state() const {
  std::shared_lock lock(mutex_);
  return state_;
}

std::string Session::export_bytes(ExportKind kind) const {
  std::shared_lock lock(mutex_);
  return export_session(state_, kind);
}

std::size_t Session::gate_evaluations() const {
  std::shared_lock lock(mutex_);
  return gate_evaluations_;
}

void Session::push(Snapshot next) {
  state_.history.resize(state_.cursor + 1);
  state_.history.push_back(std::move(next));
  state_.cursor = state_.history.size() - 1;
}

LayoutResult Session::warm_layout(const Partition& parent, const LayoutResult& parent_layout,
                                  const Partition& child) const {
  // Each new cluster starts at the mean position of its members' old clusters.
  std::vector<double> sx(child.k, 0.0), sy(child.k, 0.0), count(child.k, 0.0);
  for (std::size_t v = 0; v < child.assignment.size(); ++v) {
    const Point& p = parent_layout.positions[parent.assignment[v]];
    sx[child.assignment[v]] += p.x;
    sy[child.assignment[v]] += p.y;
    count[child.assignment[v]] += 1.0;
  }
  LayoutOptions lo;
  lo.iterations = options_.layout_iterations;
  lo.initial.resize(child.k);
  for (ClusterId c = 0; c < child.k; ++c) lo.initial[c] = Point{sx[c] / count[c], sy[c] / count[c]};
  return fr_layout(build_cluster_graph(*state_.network, child),
                   mix_seed(options_.seed, child.fingerprint()), lo);
}

std::optional<TestOverlay> Session::carried_overlay(const Snapshot& from,
                                                    const Partition& child) const {
  if (!from.overlay) return std::nullopt;
  return chi_squared_overlay(*state_.network, child, from.overlay->attribute);
}

RefineOutcome Session::refine(const std::vector<ClusterId>& targets) {
  std::unique_lock lock(mutex_);
  const Network& net = *state_.network;
  const Snapshot& cur = state_.current();
  const Partition& p = cur.partition;
  const std::set<ClusterId> wanted(targets.begin(), targets.end());
  for (ClusterId c : wanted) {
    if (c >= p.k) throw Error(ErrorCode::kUnknownCluster, "no such cluster", std::to_string(c));
  }

  RefineOutcome outcome;
  const auto members = p.members();
  std::vector<ClusterId> assignment(p.assignment);
  std::vector<ClusterId> accepted;
  ClusterId next_id = p.k;
  for (ClusterId c : wanted) {
    const Network sub = induced_subgraph(net, members[c]);
    Fnv1a key;
    key.add_value(sub.structure_hash());
    key.add_value<std::uint64_t>(options_.null.replicates);
    key.add_value<std::uint64_t>(options_.null.swaps_per_edge);
    key.add_value(options_.seed);
    auto it = gate_cache_.find(key.value());
    if (it == gate_cache_.end()) {
      const Partition whole = make_partition(sub, std::vector<ClusterId>(sub.node_count(), 0));
      GateVerdict v = gate_refinement(sub, whole, 0, mix_seed(options_.seed, sub.structure_hash()),
                                      options_.null);
      if (v.evaluated) ++gate_evaluations_;
      it = gate_cache_.emplace(key.value(), std::move(v)).first;
    }
    const GateVerdict& v = it->second;
    RefineVerdict rv;
    rv.cluster = c;
    rv.accepted = v.accepted;
    rv.evaluated = v.evaluated;
    rv.sub_clusters = v.sub_partition.k;
    rv.sub_modularity = v.sub_partition.modularity;
    if (v.evaluated) rv.threshold = v.summary.threshold;
    outcome.verdicts.push_back(rv);
    if (!v.accepted) continue;
    accepted.push_back(c);
    const ClusterId base = next_id;
    next_id += v.sub_partition.k - 1;
    for (std::size_t i = 0; i < members[c].size(); ++i) {
      const ClusterId s = v.sub_partition.assignment[i];
      if (s > 0) assignment[members[c][i]] = base + s - 1;
    }
  }
  if (accepted.empty()) return outcome;

  Snapshot next;
  next.partition = make_partition(net, std::move(assignment));
  next.step = HierarchyStep{StepKind::kRefine, p.fingerprint(), next.partition.fingerprint(), accepted};
  next.operation = "refine";
  next.layout = warm_layout(p, cur.layout, next.partition);
  next.overlay = carried_overlay(cur, next.partition);
  next.overlay_category = cur.overlay_category;
  push(std::move(next));
  outcome.changed = true;
  return outcome;
}

CoarsenOutcome Session::coarsen(std::size_t target_k) {
  std::unique_lock lock(mutex_);
  const Snapshot& cur = state_.current();
  auto stepped = vmine::coarsen(*state_.network, cur.partition, target_k);
  Snapshot next;
  next.layout = warm_layout(cur.partition, cur.layout, stepped.partition);
  next.overlay = carried_overlay(cur, stepped.partition);
  next.overlay_category = cur.overlay_category;
  next.partition = std::move(stepped.partition);
  next.step = std::move(stepped.step);
  next.operation = "coarsen";
  CoarsenOutcome outcome;
  outcome.modularity = next.partition.modularity;
  if (state_.global_null) outcome.significant = is_significant(outcome.modularity, *state_.global_null);
  push(std::move(next));
  return outcome;
}

TestOverlay Session::overlay(const std::string& attribute, const std::optional<std::string>& category) {
  std::unique_lock lock(mutex_);
  const Snapshot& cur = state_.current();
  TestOverlay o = chi_squared_overlay(*state_.network, cur.partition, attribute);
  style_overlay(cur.layout, o, category, state_.alpha);  // validates the category
  Snapshot next = cur;
  next.step.reset();
  next.operation = "overlay";
  next.overlay = o;
  next.overlay_category = category;
  push(std::move(next));
  return o;
}

Snapshot Session::groups(const std::map<ClusterId, std::string>& labels) {
  std::unique_lock lock(mutex_);
  const Snapshot& cur = state_.current();
  const Network& net = *state_.network;
  Snapshot next = cur;
  next.step.reset();
  next.operation = "groups";
  next.group_geodesics = geodesic_table_by_groups(net, cur.partition, labels);
  next.group_years.reset();
  if (options_.year_attribute) {
    next.group_years = yearly_group_distribution(net, cur.partition, labels,
                                                 *options_.year_attribute, options_.year_filter);
  }
  next.groups.clear();
  for (ClusterId c = 0; c < cur.partition.k; ++c) next.groups[c] = labels.at(c);
  push(next);
  return next;
}

void Session::undo() {
  std::unique_lock lock(mutex_);
  if (state_.cursor == 0) throw Error(ErrorCode::kNothingToUndo, "nothing to undo", state_.id);
  --state_.cursor;
}

void Session::redo() {
  std::unique_lock lock(mutex_);
  if (state_.cursor + 1 >= state_.history.size()) {
    throw Error(ErrorCode::kNothingToRedo, "nothing to redo", state_.id);
  }
  ++state_.cursor;
}

}  // namespace vmine
