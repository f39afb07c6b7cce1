#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "soma/canonical.hpp"
#include "soma/errors.hpp"
#include "soma/landmarks.hpp"

namespace {

soma::StrategyConfig cell(bool prune = false) {
  soma::StrategyConfig c;
  c.pruning = prune;
  return c;
}

const soma::LandmarkTable& depth2() {
  static const soma::LandmarkTable t = soma::build_table(2, cell());
  return t;
}

TEST(Landmarks, ExtensionCountsAddUpToAllSolutions) {
  const auto& t = depth2();
  EXPECT_EQ(t.depth(), 2);
  std::uint64_t weighted = 0;
  for (const auto& e : t.entries()) weighted += e.extension_count * e.multiplicity;
  EXPECT_EQ(weighted, 11520u);
  EXPECT_GT(t.anti_landmark_count(), 0u);
  EXPECT_GT(t.preprocessing_nodes(), 0u);
}

TEST(Landmarks, EntriesAreCanonicalAndSorted) {
  const auto& t = depth2();
  for (std::size_t i = 0; i < t.entries().size(); ++i) {
    const auto& e = t.entries()[i];
    EXPECT_EQ(soma::canonicalize(e.representative, soma::Catalog::standard().mirror_labels()), e.key);
    if (i) EXPECT_LT(t.entries()[i - 1].key, e.key);
    EXPECT_EQ(t.find(e.key), &e);
  }
  const auto lm = t.landmarks();
  for (std::size_t i = 1; i < lm.size(); ++i) EXPECT_GE(lm[i - 1].extension_count, lm[i].extension_count);
  for (const auto& e : lm) EXPECT_GT(e.extension_count, 0u);
}

TEST(Landmarks, DeadStatesReallyAreDead) {
  const auto& t = depth2();
  int checked = 0;
  for (const auto& e : t.entries()) {
    if (e.extension_count != 0) continue;
    soma::StrategyConfig c = cell();
    c.stop_mode = soma::StopMode::Exhaustive;
    const auto r = soma::solve_from(soma::state_from_labels(e.representative), c);
    EXPECT_TRUE(r.solutions.empty());
    EXPECT_TRUE(t.is_anti_landmark(e.representative, 2));
    if (++checked == 25) break;
  }
  EXPECT_GT(checked, 0);
}

TEST(Landmarks, BinaryRoundTrip) {
  const auto& t = depth2();
  std::stringstream buf;
  t.save(buf);
  const auto back = soma::LandmarkTable::load(buf);
  EXPECT_EQ(back.entries(), t.entries());
  EXPECT_EQ(back.strategy_fingerprint(), t.strategy_fingerprint());
  EXPECT_EQ(back.extra_dead(), t.extra_dead());
  std::stringstream junk("not a table");
  EXPECT_THROW(soma::LandmarkTable::load(junk), soma::Error);
}

TEST(Landmarks, QueryReturnsValidSolution) {
  const auto r = soma::query_solve(depth2(), cell());
  ASSERT_TRUE(r.solution.has_value());
  EXPECT_TRUE(soma::is_valid_solution(*r.solution));
  EXPECT_LE(r.record.query_nodes, 19251u);
}

TEST(Landmarks, QueryWithoutEntriesThrows) {
  EXPECT_THROW(soma::query_solve(soma::LandmarkTable{}, cell()), soma::NoLandmarksError);
}

TEST(Landmarks, LimitKeepsDeadStates) {
  const auto limited = depth2().with_landmark_limit(3);
  EXPECT_EQ(limited.landmarks().size(), 3u);
  EXPECT_EQ(limited.anti_landmark_count(), depth2().anti_landmark_count());
}

TEST(Landmarks, PruningWithTableKeepsSolutions) {
  soma::StrategyConfig c = cell(true);
  c.stop_mode = soma::StopMode::Exhaustive;
  c.landmark_table = std::make_shared<const soma::LandmarkTable>(soma::build_table(2, cell(true)));
  const auto r = soma::solve(c);
  EXPECT_EQ(r.solutions.size(), 11520u);
  soma::StrategyConfig plain = cell(true);
  plain.stop_mode = soma::StopMode::Exhaustive;
  EXPECT_LT(r.stats.total_nodes, soma::solve(plain).stats.total_nodes);
}

TEST(Landmarks, SweepDepthTwo) {
  const auto rec = soma::tradeoff_sweep({2}, {0, 10, 100, 1000}, cell());
  ASSERT_EQ(rec.size(), 4u);
  EXPECT_EQ(rec[0].preprocessing_nodes, 0u);
  for (std::size_t i = 1; i < rec.size(); ++i) {
    EXPECT_GE(rec[i].preprocessing_nodes, rec[i - 1].preprocessing_nodes);
    EXPECT_LE(rec[i].query_nodes, rec[i - 1].query_nodes);
  }
  const auto row = soma::tradeoff_csv_row(rec[0]);
  EXPECT_EQ(row.rfind("2,0,0,", 0), 0u);
}

// Per-depth means can rise once dead nodes are gone, but the implied level
// sizes (prefix products) cannot.
TEST(Landmarks, BranchingBoundShrinksLevels) {
  const auto plain = soma::strategy_tree_branching(cell(), nullptr);
  const auto bound = soma::effective_bf_upper_bound(depth2(), cell());
  double a = 1, b = 1;
  for (int d = 0; d < soma::kMaxDepth; ++d) {
    a *= plain[d];
    b *= bound[d];
    EXPECT_LE(b, a * (1 + 1e-9)) << d;
  }
  EXPECT_NEAR(a, 11520, 1e-6);
  EXPECT_NEAR(b, 11520, 1e-6);
}

}  // namespace
