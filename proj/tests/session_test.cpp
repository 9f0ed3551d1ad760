#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "fixtures.hpp"
#include "vmine/error.hpp"
#include "vmine/session.hpp"

namespace vmine {
namespace {

SessionOptions small_options(std::uint64_t seed = 1) {
  SessionOptions o;
  o.seed = seed;
  o.null.replicates = 20;
  o.layout_iterations = 100;
  o.year_attribute = "year";
  return o;
}

Session make_session(std::uint64_t seed = 1) {
  return Session("s1", "d1", std::make_shared<const Network>(testing::labeled_cliques()), small_options(seed));
}

// Observable state only; history bookkeeping is expected to differ.
std::string bytes(const Session& s) { return canonical_dump(snapshot_payload(s.state())); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no vmine::Error thrown";
  return ErrorCode::kInvalidConfig;
}

TEST(Session, StartsClusteredWithNull) {
  Session s = make_session();
  const SessionState st = s.state();
  EXPECT_EQ(st.history.size(), 1u);
  EXPECT_EQ(st.cursor, 0u);
  EXPECT_GE(st.current().partition.k, 2u);
  ASSERT_TRUE(st.global_null);
  EXPECT_EQ(st.global_null->replicates(), 20u);
  EXPECT_EQ(st.current().layout.positions.size(), st.current().partition.k);
}

TEST(Session, RejectedRefineChangesNothing) {
  Session s = make_session();
  const std::string before = bytes(s);
  const RefineOutcome out = s.refine({0});
  ASSERT_EQ(out.verdicts.size(), 1u);
  EXPECT_FALSE(out.verdicts[0].accepted);
  EXPECT_FALSE(out.changed);
  EXPECT_EQ(bytes(s), before);
  EXPECT_EQ(s.state().history.size(), 1u);
}

TEST(Session, EmptyRefineIsNoOp) {
  Session s = make_session();
  const std::string before = bytes(s);
  EXPECT_FALSE(s.refine({}).changed);
  EXPECT_EQ(bytes(s), before);
  EXPECT_EQ(code_of([&] { s.refine({99}); }), ErrorCode::kUnknownCluster);
}

TEST(Session, CoarsenUndoRestoresBytes) {
  Session s = make_session();
  const std::string before = bytes(s);
  const std::size_t k = s.state().current().partition.k;
  const CoarsenOutcome c = s.coarsen(k - 1);
  EXPECT_EQ(s.state().current().partition.k, k - 1);
  EXPECT_TRUE(c.significant.has_value());
  EXPECT_EQ(c.modularity, s.state().current().partition.modularity);
  s.undo();
  EXPECT_EQ(bytes(s), before);
  EXPECT_EQ(code_of([&] { s.coarsen(k); }), ErrorCode::kBadTarget);
}

TEST(Session, AcceptedRefineUndoRedo) {
  Session s = make_session();
  s.coarsen(1);
  const std::string merged = bytes(s);
  const RefineOutcome out = s.refine({0});
  ASSERT_EQ(out.verdicts.size(), 1u);
  EXPECT_TRUE(out.verdicts[0].evaluated);
  ASSERT_TRUE(out.verdicts[0].accepted);
  EXPECT_TRUE(out.changed);
  const std::string refined = bytes(s);
  EXPECT_NE(refined, merged);
  const auto step = s.state().current().step;
  ASSERT_TRUE(step);
  EXPECT_EQ(step->kind, StepKind::kRefine);
  s.undo();
  EXPECT_EQ(bytes(s), merged);
  s.redo();
  EXPECT_EQ(bytes(s), refined);
}

TEST(Session, GateVerdictsAreCached) {
  Session s = make_session();
  s.coarsen(1);
  s.refine({0});
  const std::size_t runs = s.gate_evaluations();
  EXPECT_GE(runs, 1u);
  if (s.state().cursor == 2) s.undo();
  s.refine({0});
  EXPECT_EQ(s.gate_evaluations(), runs);
}

TEST(Session, HistoryBounds) {
  Session s = make_session();
  EXPECT_EQ(code_of([&] { s.undo(); }), ErrorCode::kNothingToUndo);
  EXPECT_EQ(code_of([&] { s.redo(); }), ErrorCode::kNothingToRedo);
  const std::string origin = bytes(s);
  const std::size_t k = s.state().current().partition.k;
  s.overlay("kind", std::nullopt);
  s.coarsen(k - 1);
  s.overlay("kind", "x");
  for (int i = 0; i < 3; ++i) s.undo();
  EXPECT_EQ(bytes(s), origin);
  // A new operation discards the redo branch.
  s.coarsen(k - 1);
  EXPECT_EQ(code_of([&] { s.redo(); }), ErrorCode::kNothingToRedo);
}

TEST(Session, OverlayStylesWithoutMovingLayout) {
  Session s = make_session();
  const LayoutResult before = s.state().current().layout;
  const TestOverlay o = s.overlay("kind", "y");
  EXPECT_EQ(o.attribute, "kind");
  const SessionState state = s.state();
  const Snapshot& now = state.current();
  EXPECT_EQ(now.layout, before);
  EXPECT_EQ(now.overlay_category, "y");
  EXPECT_EQ(code_of([&] { s.overlay("flat", std::nullopt); }), ErrorCode::kDegenerateGlobal);
  EXPECT_EQ(code_of([&] { s.overlay("kind", "zz"); }), ErrorCode::kUnknownCategory);
  EXPECT_EQ(code_of([&] { s.overlay("nope", std::nullopt); }), ErrorCode::kUnknownAttribute);
}

TEST(Session, GroupsProduceTablesAndCsvExport) {
  Session s = make_session();
  EXPECT_EQ(code_of([&] { s.export_bytes(ExportKind::kCsvTables); }), ErrorCode::kMissingArtifact);
  const Partition p = s.state().current().partition;
  std::map<ClusterId, std::string> one;
  for (ClusterId c = 0; c < p.k; ++c) one[c] = "all";
  const Snapshot snap = s.groups(one);
  ASSERT_TRUE(snap.group_geodesics);
  EXPECT_EQ(snap.group_geodesics->cells[0][0], snap.group_geodesics->global);
  ASSERT_TRUE(snap.group_years);
  EXPECT_EQ(snap.group_years->classes, (std::vector<std::string>{"all"}));
  const std::string csv = s.export_bytes(ExportKind::kCsvTables);
  EXPECT_NE(csv.find("# group_geodesics"), std::string::npos);
  EXPECT_NE(csv.find("# group_years"), std::string::npos);
  // Relabeling identically is deterministic.
  const std::string first = bytes(s);
  s.undo();
  s.groups(one);
  EXPECT_EQ(bytes(s), first);
  EXPECT_EQ(code_of([&] { s.groups({{0, "a"}}); }), ErrorCode::kUnlabeledCluster);
}

TEST(Session, SessionsAreIndependent) {
  auto net = std::make_shared<const Network>(testing::labeled_cliques());
  Session a("a", "d", net, small_options());
  Session b("b", "d", net, small_options());
  const std::string b_before = bytes(b);
  a.coarsen(1);
  a.overlay("kind", std::nullopt);
  EXPECT_EQ(bytes(b), b_before);
}

TEST(Session, ReadersSeeWholeSnapshots) {
  Session s = make_session();
  const std::size_t k = s.state().current().partition.k;
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::thread reader([&] {
    while (!done) {
      const SessionState st = s.state();
      const Snapshot& cur = st.current();
      if (cur.layout.positions.size() != cur.partition.k) ++bad;
    }
  });
  for (int i = 0; i < 20; ++i) {
    s.coarsen(k - 1);
    s.undo();
  }
  done = true;
  reader.join();
  EXPECT_EQ(bad, 0);
}

}  // namespace
}  // namespace vmine
