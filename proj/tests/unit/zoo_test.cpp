#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "soma/zoo.hpp"

namespace {

namespace zoo = soma::zoo;

// 8-puzzle on a 3x3 torus: every blank has four neighbours, so a
// non-backtracking walk always has exactly three moves.
class TorusPuzzle : public zoo::PuzzleSpace {
 public:
  std::string name() const override { return "torus"; }
  std::vector<zoo::State> initial_states() const override { return {{1, 2, 3, 4, 5, 6, 7, 8, 0, -1}}; }
  std::vector<zoo::State> successors(const zoo::State& s) const override {
    int z = 0;
    while (s[z] != 0) ++z;
    std::vector<zoo::State> out;
    const int r = z / 3, c = z % 3;
    for (int n : {((r + 2) % 3) * 3 + c, ((r + 1) % 3) * 3 + c, r * 3 + (c + 2) % 3, r * 3 + (c + 1) % 3}) {
      if (n == s[9]) continue;
      zoo::State t = s;
      std::swap(t[z], t[n]);
      t[9] = static_cast<std::int16_t>(z);
      out.push_back(t);
    }
    return out;
  }
  bool is_goal(const zoo::State&) const override { return false; }
  bool non_backtracking() const override { return true; }
  int horizon() const override { return 6; }
};

TEST(Profile, TorusIsConstantAfterTheFirstMove) {
  TorusPuzzle t;
  const auto p = zoo::zoo_profile(t);
  ASSERT_EQ(p.per_move_mean.size(), 6u);
  EXPECT_EQ(p.per_move_mean[0], 4.0);
  for (std::size_t m = 1; m < p.per_move_mean.size(); ++m) EXPECT_EQ(p.per_move_mean[m], 3.0);
  zoo::ProfileSettings sampled;
  sampled.exhaustive = false;
  sampled.samples = 300;
  const auto q = zoo::zoo_profile(t, sampled);
  for (std::size_t m = 1; m < q.per_move_mean.size(); ++m) EXPECT_EQ(q.per_move_mean[m], 3.0);
}

TEST(EightPuzzle, NonBacktrackingCountsBySquareKind) {
  const auto space = zoo::eight_puzzle_space(true);
  const auto plain = zoo::eight_puzzle_space(false);
  std::mt19937_64 rng(3);
  const std::map<zoo::SquareKind, std::size_t> expected{
      {zoo::SquareKind::Corner, 1}, {zoo::SquareKind::Side, 2}, {zoo::SquareKind::Center, 3}};
  for (int walk = 0; walk < 200; ++walk) {
    zoo::State s = space->initial_states()[0];
    for (int step = 0; step < 30; ++step) {
      const auto succ = space->successors(s);
      if (step > 0) EXPECT_EQ(succ.size(), expected.at(zoo::square_kind(zoo::blank_position(s))));
      EXPECT_EQ(plain->successors(s).size(), expected.at(zoo::square_kind(zoo::blank_position(s))) + 1);
      s = succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng)];
    }
  }
}

TEST(EightPuzzle, SquareKinds) {
  EXPECT_EQ(zoo::square_kind(0), zoo::SquareKind::Corner);
  EXPECT_EQ(zoo::square_kind(1), zoo::SquareKind::Side);
  EXPECT_EQ(zoo::square_kind(4), zoo::SquareKind::Center);
  EXPECT_EQ(zoo::square_kind(8), zoo::SquareKind::Corner);
}

TEST(EightPuzzle, DiameterMatchesIndependentBfs) {
  std::size_t reachable = 0;
  const int ecc = oracle::eight_puzzle_eccentricity(&reachable);
  const auto d = zoo::eight_puzzle_diameter();
  EXPECT_EQ(d.eccentricity, ecc);
  EXPECT_EQ(d.reachable, reachable);
  EXPECT_EQ(reachable, 181440u);
  ASSERT_FALSE(d.farthest.empty());
  const zoo::State goal{1, 2, 3, 4, 5, 6, 7, 8, 0, -1};
  EXPECT_EQ(zoo::eight_puzzle_distance(goal, d.farthest[0]), ecc);
  EXPECT_EQ(zoo::eight_puzzle_distance(goal, goal), 0);
  const zoo::State odd{2, 1, 3, 4, 5, 6, 7, 8, 0, -1};
  EXPECT_EQ(zoo::eight_puzzle_distance(goal, odd), -1);
}

TEST(MagicSquare, GoalsMatchPermutationCount) {
  const auto space = zoo::magic_square_space();
  const auto tree = zoo::exhaustive_tree(*space, 9);
  std::uint64_t goals = 0;
  for (auto g : tree.goals) goals += g;
  EXPECT_EQ(goals, oracle::magic_square_count());
  EXPECT_EQ(goals, 8u);
}

TEST(MagicSquare, FirstMovesAreUnconstrained) {
  const auto p = zoo::zoo_profile(*zoo::magic_square_space());
  ASSERT_GE(p.per_move_mean.size(), 2u);
  EXPECT_EQ(p.per_move_mean[0], 9.0);
  EXPECT_EQ(p.per_move_mean[1], 8.0);
}

TEST(SlothouberGraatsma, CanonicalCountMatchesBruteForce) {
  const auto space = zoo::slothouber_graatsma_space();
  std::set<zoo::Packing> canonical;
  std::vector<zoo::State> stack = space->initial_states();
  while (!stack.empty()) {
    const auto s = stack.back();
    stack.pop_back();
    if (space->is_goal(s)) canonical.insert(zoo::canonical_packing(zoo::sg_packing(s)));
    for (auto& t : space->successors(s)) stack.push_back(std::move(t));
  }
  EXPECT_EQ(canonical.size(), oracle::slothouber_graatsma_count());
  EXPECT_EQ(canonical.size(), 1u);
}

TEST(SlothouberGraatsma, BranchingNonIncreasing) {
  const auto p = zoo::zoo_profile(*zoo::slothouber_graatsma_space());
  for (std::size_t m = 1; m < p.per_move_mean.size(); ++m) EXPECT_LE(p.per_move_mean[m], p.per_move_mean[m - 1]);
}

TEST(SomaSpace, FreeModelRootDegreeIsPlacementCount) {
  const auto space = zoo::soma_space();
  EXPECT_EQ(space->successors(space->initial_states()[0]).size(), 688u);
  soma::StrategyConfig rnd;
  rnd.ordering = soma::Ordering::Randomized;
  EXPECT_THROW(zoo::soma_space(rnd), std::invalid_argument);
}

TEST(SomaSpace, SamplerMirrorsNativeWalks) {
  const auto space = zoo::soma_space();
  EXPECT_EQ(zoo::sample_space(*space, 2, 200, 17), soma::sample_branching(2, 200, 17));
}

TEST(SomaSpace, CellOrderedTreeMatchesNative) {
  const auto space = zoo::soma_space(soma::StrategyConfig{});
  const auto tree = zoo::exhaustive_tree(*space, 7);
  const auto shape = soma::tree_shape(soma::StrategyConfig{});
  for (int d = 0; d < 7; ++d) {
    soma::DegreeHistogram expected;
    for (std::size_t k = 0; k < shape.out_degree_counts[d].size(); ++k)
      if (shape.out_degree_counts[d][k]) expected.add(static_cast<int>(k), shape.out_degree_counts[d][k]);
    EXPECT_EQ(tree.histograms[d], expected) << d;
  }
  EXPECT_EQ(tree.goals[7], 11520u);
}

TEST(Exhaustive, BudgetIsEnforced) {
  EXPECT_THROW(zoo::exhaustive_tree(*zoo::eight_puzzle_space(false), 20, 1000), soma::HistogramBudgetError);
}

TEST(Csv, PuzzleColumn) {
  const auto p = zoo::zoo_profile(*zoo::slothouber_graatsma_space());
  const auto rows = zoo::zoo_csv_rows(p);
  EXPECT_EQ(rows.rfind("slothouber_graatsma,0,", 0), 0u) << rows.substr(0, 40);
  EXPECT_EQ(zoo::zoo_csv_header(), "puzzle,depth,out_degree,count\n");
  EXPECT_EQ(p.to_json().at("puzzle"), "slothouber_graatsma");
}

}  // namespace
