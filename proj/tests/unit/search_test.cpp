#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "soma/canonical.hpp"
#include "soma/errors.hpp"
#include "soma/search.hpp"
#include "soma/state.hpp"

namespace {

const soma::Catalog& cat() { return soma::Catalog::standard(); }

soma::StrategyConfig strategy(soma::Ordering o, bool prune, std::uint64_t seed = 0,
                              soma::StopMode mode = soma::StopMode::FirstSolution) {
  soma::StrategyConfig c;
  c.ordering = o;
  c.pruning = prune;
  c.seed = seed;
  c.stop_mode = mode;
  return c;
}

std::set<soma::CanonicalForm> canonical_set(const std::vector<soma::PuzzleState>& states) {
  std::set<soma::CanonicalForm> out;
  for (const auto& s : states) out.insert(soma::canonicalize(s));
  return out;
}

TEST(State, ApplyAndRemove) {
  const auto& p = cat().placements_of(1)[0];
  const soma::PuzzleState s = soma::apply({}, p);
  EXPECT_EQ(s.depth(), 1);
  EXPECT_EQ(s.occupancy(), p.occupied);
  EXPECT_TRUE(s.uses(1));
  EXPECT_THROW(soma::apply(s, cat().placements_of(1)[1]), soma::PieceReuseError);
  for (const auto& q : cat().placements_of(2))
    if (q.occupied & p.occupied) {
      EXPECT_THROW(soma::apply(s, q), soma::OverlapError);
      break;
    }
  EXPECT_EQ(soma::remove_last(s), soma::PuzzleState{});
  EXPECT_THROW(soma::remove_last(soma::PuzzleState{}), soma::EmptyStateError);
}

TEST(State, LabelsRoundTrip) {
  const auto r = soma::solve(strategy(soma::Ordering::CellOrdered, false));
  ASSERT_EQ(r.solutions.size(), 1u);
  const auto& s = r.solutions[0];
  EXPECT_TRUE(soma::is_valid_solution(s));
  const auto rebuilt = soma::state_from_labels(s.labels());
  EXPECT_EQ(rebuilt.labels(), s.labels());
  soma::Labeling broken = s.labels();
  std::swap(broken[0], broken[26]);
  if (broken != s.labels()) EXPECT_THROW(soma::state_from_labels(broken), soma::FormatError);
}

TEST(Canonical, InvariantUnderAllSymmetries) {
  const auto r = soma::solve(strategy(soma::Ordering::CellOrdered, false));
  const auto labels = r.solutions[0].labels();
  const auto mirror = cat().mirror_labels();
  const auto key = soma::canonicalize(labels, mirror);
  for (int s = 0; s < soma::kSymmetryCount; ++s) {
    const auto t = soma::transform_labels(labels, s, mirror);
    EXPECT_EQ(soma::canonicalize(t, mirror), key) << s;
    EXPECT_LE(key.labels, t);
  }
  EXPECT_EQ(soma::orbit_size(labels, mirror), 48);
}

TEST(Canonical, TextRoundTrip) {
  const auto e = soma::enumerate_all_solutions();
  const auto text = soma::format_solutions(e.canonical);
  EXPECT_EQ(soma::parse_solutions(text), e.canonical);
  EXPECT_THROW(soma::CanonicalForm::parse("123"), soma::ParseError);
  EXPECT_THROW(soma::CanonicalForm::parse(std::string(26, '1') + "x"), soma::ParseError);
}

TEST(Canonical, TwoHundredFortyDistinctSolutions) {
  const auto e = soma::enumerate_all_solutions();
  EXPECT_EQ(e.canonical.size(), 240u);
  EXPECT_EQ(e.raw_count, 11520u);
  std::size_t sum = 0;
  for (auto m : e.multiplicity) sum += m;
  EXPECT_EQ(sum, e.raw_count);
  // every orbit is free under the 48 symmetries
  for (const auto& c : e.canonical) EXPECT_EQ(soma::orbit_size(c.labels, cat().mirror_labels()), 48);
}

TEST(Search, VoidPruneMatchesFloodFill) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 5000; ++i) {
    const auto mask = static_cast<soma::CellMask>(rng() & soma::kFullMask);
    bool small = false;
    for (int s : oracle::empty_regions(mask)) small = small || s <= 2;
    EXPECT_EQ(soma::void_prune(mask), small) << mask;
  }
  EXPECT_FALSE(soma::void_prune(soma::CellMask{0}));
  EXPECT_FALSE(soma::void_prune(soma::kFullMask));
  EXPECT_TRUE(soma::void_prune(soma::kFullMask & ~soma::cell_bit(0)));
}

TEST(Search, OrderingsSelectExpectedCells) {
  const auto cell = strategy(soma::Ordering::CellOrdered, false);
  EXPECT_EQ(soma::select_cell(0, 0, cell, 0), 0);
  EXPECT_EQ(soma::select_cell(0b111, 0, cell, 0), 3);
  EXPECT_EQ(soma::select_cell(soma::kFullMask, 0, cell, 0), -1);
  const auto layer = strategy(soma::Ordering::LayerOrdered, false);
  // layer order fills z = 0 first
  EXPECT_EQ(soma::select_cell(soma::cell_bit(0), 0, layer, 0), soma::cell_index({0, 1, 0}));
}

TEST(Search, SuccessorsCoverTheSelectedCell) {
  for (auto o : {soma::Ordering::CellOrdered, soma::Ordering::LayerOrdered, soma::Ordering::Mcv}) {
    const auto c = strategy(o, false);
    const int cell = soma::select_cell(0, 0, c, soma::root_path_hash(0));
    const auto succ = soma::successors({}, c);
    EXPECT_EQ(succ.size(), cat().covering(cell).size());
    for (const auto& p : succ) EXPECT_TRUE(p.occupied >> cell & 1u);
  }
}

TEST(Search, RandomizedIsDeterministicPerSeed) {
  const auto a = soma::solve(strategy(soma::Ordering::Randomized, false, 42));
  const auto b = soma::solve(strategy(soma::Ordering::Randomized, false, 42));
  ASSERT_EQ(a.solutions.size(), 1u);
  EXPECT_EQ(a.solutions[0].labels(), b.solutions[0].labels());
  EXPECT_EQ(a.stats.nodes_created_per_depth, b.stats.nodes_created_per_depth);
  EXPECT_TRUE(soma::is_valid_solution(a.solutions[0]));
}

TEST(Search, ExhaustiveSolutionSetIndependentOfStrategy) {
  const auto reference = soma::enumerate_all_solutions();
  const std::set<soma::CanonicalForm> expected(reference.canonical.begin(), reference.canonical.end());
  for (auto o : {soma::Ordering::CellOrdered, soma::Ordering::LayerOrdered, soma::Ordering::Mcv})
    for (bool prune : {false, true}) {
      const auto r = soma::solve(strategy(o, prune, 0, soma::StopMode::Exhaustive));
      EXPECT_EQ(r.solutions.size(), 11520u) << soma::to_string(o) << prune;
      EXPECT_EQ(canonical_set(r.solutions), expected);
      EXPECT_EQ(r.stats.solutions_found, 11520u);
    }
}

TEST(Search, PruningNeverAddsNodes) {
  for (auto o : {soma::Ordering::CellOrdered, soma::Ordering::LayerOrdered, soma::Ordering::Mcv}) {
    const auto plain = soma::solve(strategy(o, false));
    const auto pruned = soma::solve(strategy(o, true));
    EXPECT_LE(pruned.stats.total_nodes, plain.stats.total_nodes) << soma::to_string(o);
    const auto plain_all = soma::tree_shape(strategy(o, false));
    const auto pruned_all = soma::tree_shape(strategy(o, true));
    EXPECT_LE(pruned_all.stats.total_nodes, plain_all.stats.total_nodes);
  }
}

TEST(Search, TreeShapeIsConsistent) {
  const auto shape = soma::tree_shape(strategy(soma::Ordering::CellOrdered, false));
  std::uint64_t total = 0;
  for (int d = 0; d <= soma::kMaxDepth; ++d) {
    std::uint64_t nodes = 0, children = 0;
    for (std::size_t k = 0; k < shape.out_degree_counts[d].size(); ++k) {
      nodes += shape.out_degree_counts[d][k];
      children += k * shape.out_degree_counts[d][k];
    }
    EXPECT_EQ(nodes, shape.stats.nodes_created_per_depth[d]) << d;
    if (d < soma::kMaxDepth) EXPECT_EQ(children, shape.stats.nodes_created_per_depth[d + 1]) << d;
    total += nodes;
  }
  EXPECT_EQ(total, shape.stats.total_nodes);
  EXPECT_EQ(shape.stats.nodes_created_per_depth[0], 1u);
  EXPECT_EQ(shape.stats.nodes_created_per_depth[soma::kMaxDepth], 11520u);
}

TEST(Search, BacktrackHistogram) {
  const auto r = soma::solve(strategy(soma::Ordering::CellOrdered, false));
  const auto h = soma::backtrack_histogram(r.stats);
  double sum = 0;
  for (double v : h) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_THROW(soma::backtrack_histogram(soma::SearchStats{}), soma::EmptyStatsError);
}

TEST(Search, PathHashIsOrderSensitive) {
  EXPECT_NE(soma::extend_path_hash(soma::extend_path_hash(soma::root_path_hash(1), 3), 5),
            soma::extend_path_hash(soma::extend_path_hash(soma::root_path_hash(1), 5), 3));
  EXPECT_NE(soma::root_path_hash(1), soma::root_path_hash(2));
}

TEST(Search, ParseOrdering) {
  EXPECT_EQ(soma::parse_ordering("random"), soma::Ordering::Randomized);
  EXPECT_EQ(soma::parse_ordering("mcv"), soma::Ordering::Mcv);
  EXPECT_THROW(soma::parse_ordering("sideways"), soma::ParseError);
}

TEST(Search, StatsCsvHasOneRowPerDepth) {
  const auto c = strategy(soma::Ordering::CellOrdered, true);
  const auto r = soma::solve(c);
  const auto rows = soma::stats_csv_rows(r.stats, c);
  EXPECT_EQ(std::count(rows.begin(), rows.end(), '\n'), soma::kMaxDepth + 1);
  EXPECT_EQ(soma::stats_csv_header(), "ordering,pruning,landmarks,seed,depth,nodes,backtracks\n");
  const auto j = soma::to_json(r.stats, c);
  EXPECT_EQ(j.at("total_nodes").get<std::uint64_t>(), r.stats.total_nodes);
}

}  // namespace
