// One line per acceptance criterion. Exit status is nonzero if any fails.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "soma/canonical.hpp"
#include "soma/landmarks.hpp"
#include "soma/metrics.hpp"
#include "soma/sat.hpp"
#include "soma/search.hpp"
#include "soma/zoo.hpp"

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

soma::StrategyConfig config(soma::Ordering o, bool prune, std::uint64_t seed = 0,
                            soma::StopMode mode = soma::StopMode::FirstSolution) {
  soma::StrategyConfig c;
  c.ordering = o;
  c.pruning = prune;
  c.seed = seed;
  c.stop_mode = mode;
  return c;
}

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

Outcome solution_count() {
  const auto dfs = soma::enumerate_all_solutions();
  const auto models = soma::sat::enumerate_models(soma::sat::encode());
  std::set<soma::CanonicalForm> sat;
  for (const auto& m : models) sat.insert(soma::canonicalize(soma::sat::decode(m)));
  const std::set<soma::CanonicalForm> dfs_set(dfs.canonical.begin(), dfs.canonical.end());
  const bool pass = dfs.canonical.size() == 240 && sat.size() == 240 && dfs_set == sat;
  return {pass, "dfs " + std::to_string(dfs.canonical.size()) + ", sat " + std::to_string(sat.size()) +
                    ", sets equal " + (dfs_set == sat ? "yes" : "no")};
}

Outcome branching_mean() {
  // ratio method over the cell-ordered tree, depths 1..6 so the solution leaves at depth 7 are excluded
  const auto shape = soma::tree_shape(config(soma::Ordering::CellOrdered, false));
  const std::vector<std::uint64_t> nodes(shape.stats.nodes_created_per_depth.begin(),
                                         shape.stats.nodes_created_per_depth.end());
  const auto avg = soma::average_branching(nodes, soma::kMaxDepth - 1);
  auto inside = [](double v) { return v >= 27.84 && v <= 30.72; };
  return {inside(avg.depth_average) || inside(avg.node_weighted),
          "depth average " + fmt(avg.depth_average) + ", node weighted " + fmt(avg.node_weighted) +
              ", target [27.84, 30.72]"};
}

Outcome monotone_decay() {
  std::vector<double> mean(7), var(7);
  for (int d = 1; d <= 6; ++d) {
    soma::DegreeHistogram h;
    for (int k : soma::sample_branching(d, 10000, 1000 + d)) h.add(k);
    mean[d] = h.mean();
    var[d] = h.variance();
  }
  bool decreasing = true;
  std::string detail = "means";
  for (int d = 1; d <= 6; ++d) {
    if (d > 1) decreasing = decreasing && mean[d] < mean[d - 1];
    detail += " " + fmt(mean[d], 2);
  }
  detail += "; var d2 " + fmt(var[2], 1) + ", var d6 " + fmt(var[6], 4);
  return {decreasing && var[6] < var[2], detail};
}

Outcome cnf_size() {
  const auto f = soma::sat::encode();
  std::size_t closed = 34;
  std::array<std::size_t, 27> cover{};
  for (const auto& p : soma::standard_pieces()) {
    std::vector<oracle::P3> cells;
    for (const auto& v : p.cells) cells.push_back({v.x, v.y, v.z});
    const auto masks = oracle::placement_masks(cells);
    closed += masks.size() * (masks.size() - 1) / 2;
    for (auto m : masks)
      for (int c = 0; c < 27; ++c) cover[c] += m >> c & 1u;
  }
  for (auto n : cover) closed += n * (n - 1) / 2;
  const std::size_t emitted = soma::sat::parse_dimacs(soma::sat::emit_dimacs(f)).clauses.size();
  return {emitted > 150000 && emitted == closed,
          "emitted " + std::to_string(emitted) + ", closed form " + std::to_string(closed)};
}

Outcome effective_bf_sanity() {
  const bool exact = soma::effective_bf(7) == 1.0 && soma::effective_bf(127) == 2.0;
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> e(0.0, 9.0);
  std::vector<double> ns(1000);
  for (auto& n : ns) n = std::pow(10.0, e(rng));
  std::sort(ns.begin(), ns.end());
  int violations = 0;
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] > ns[i - 1] && !(soma::effective_bf(ns[i]) > soma::effective_bf(ns[i - 1]))) ++violations;
  return {exact && violations == 0, std::string("b*(7), b*(127) exact ") + (exact ? "yes" : "no") +
                                        ", monotonicity violations " + std::to_string(violations) + "/999"};
}

Outcome strategy_ordering() {
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  auto lm = config(soma::Ordering::CellOrdered, true);
  lm.landmark_table = std::make_shared<const soma::LandmarkTable>(soma::build_table(2, lm));
  const auto m = soma::strategy_matrix({{"randomized", config(soma::Ordering::Randomized, false)},
                                        {"cell", config(soma::Ordering::CellOrdered, false)},
                                        {"cell+prune", config(soma::Ordering::CellOrdered, true)},
                                        {"cell+prune+landmarks", lm}},
                                       seeds, soma::MatrixProtocol::ExhaustiveTree);
  const double r = m.cells[0].second, c = m.cells[1].second, cp = m.cells[2].second, cpl = m.cells[3].second;

  auto solutions = [](bool prune) {
    std::set<soma::CanonicalForm> out;
    for (const auto& s :
         soma::solve(config(soma::Ordering::CellOrdered, prune, 0, soma::StopMode::Exhaustive)).solutions)
      out.insert(soma::CanonicalForm{s.labels()});
    return out;
  };
  const bool same = solutions(false) == solutions(true);
  return {r > c && c >= cp && cp >= cpl && same,
          "exhaustive-tree b*: randomized " + fmt(r) + ", cell " + fmt(c) + ", +prune " + fmt(cp) + ", +landmarks " +
              fmt(cpl) + "; pruned solution set unchanged " + (same ? "yes" : "no")};
}

Outcome backtrack_shapes() {
  std::array<std::uint64_t, soma::kMaxDepth + 1> random_bt{};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto r = soma::solve(config(soma::Ordering::Randomized, false, seed));
    for (int d = 0; d <= soma::kMaxDepth; ++d) random_bt[d] += r.stats.backtracks_per_depth[d];
  }
  const auto cell = soma::solve(config(soma::Ordering::CellOrdered, false));
  const int mr = soma::modal_depth(random_bt);
  const int mc = soma::modal_depth(cell.stats.backtracks_per_depth);
  const bool final_placements = mc >= soma::kMaxDepth - 2;
  return {mr < mc && final_placements,
          "modal depth randomized (100 seeds) " + std::to_string(mr) + ", cell-ordered " + std::to_string(mc)};
}

Outcome landmark_tradeoff() {
  const auto rec = soma::tradeoff_sweep({2, 3}, {0, 10, 100, 1000}, config(soma::Ordering::CellOrdered, false));
  bool monotone = true;
  for (int i = 1; i < 4; ++i)
    monotone = monotone && rec[i].preprocessing_nodes >= rec[i - 1].preprocessing_nodes &&
               rec[i].query_nodes <= rec[i - 1].query_nodes;
  const auto red2 = static_cast<long long>(rec[0].query_nodes) - static_cast<long long>(rec[3].query_nodes);
  const auto red3 = static_cast<long long>(rec[4].query_nodes) - static_cast<long long>(rec[7].query_nodes);
  std::string detail = "depth 2 query nodes";
  for (int i = 0; i < 4; ++i) detail += " " + std::to_string(rec[i].query_nodes);
  detail += ", preprocessing";
  for (int i = 0; i < 4; ++i) detail += " " + std::to_string(rec[i].preprocessing_nodes);
  detail += "; reduction depth 2 " + std::to_string(red2) + ", depth 3 " + std::to_string(red3);
  return {monotone && red3 < red2, detail};
}

Outcome eight_puzzle() {
  namespace zoo = soma::zoo;
  const auto space = zoo::eight_puzzle_space(true);
  const std::map<zoo::SquareKind, std::size_t> expected{
      {zoo::SquareKind::Corner, 1}, {zoo::SquareKind::Side, 2}, {zoo::SquareKind::Center, 3}};
  std::mt19937_64 rng(8);
  bool counts = true, pattern = false;
  for (int walk = 0; walk < 10000; ++walk) {
    zoo::State s = space->initial_states()[0];
    std::vector<zoo::SquareKind> kinds{zoo::square_kind(zoo::blank_position(s))};
    for (int step = 0; step < 50; ++step) {
      const auto succ = space->successors(s);
      if (step > 0) counts = counts && succ.size() == expected.at(kinds.back());
      s = succ[std::uniform_int_distribution<std::size_t>(0, succ.size() - 1)(rng)];
      kinds.push_back(zoo::square_kind(zoo::blank_position(s)));
    }
    for (std::size_t i = 2; i < kinds.size(); ++i)
      pattern = pattern || (kinds[i - 2] == zoo::SquareKind::Center && kinds[i - 1] == zoo::SquareKind::Side &&
                            kinds[i] == zoo::SquareKind::Center);
  }
  const int d1 = zoo::eight_puzzle_diameter().eccentricity;
  const int d2 = zoo::eight_puzzle_diameter().eccentricity;
  const int ref = oracle::eight_puzzle_eccentricity();
  return {counts && !pattern && d1 == d2 && d1 == ref,
          std::string("counts corner/side/center = 1/2/3 ") + (counts ? "yes" : "no") + ", center-side-center " +
              (pattern ? "seen" : "never") + ", D8 " + std::to_string(d1) + " (repeat " + std::to_string(d2) +
              ", BFS oracle " + std::to_string(ref) + ")"};
}

Outcome zoo_monotonicity() {
  namespace zoo = soma::zoo;
  auto nonincreasing = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] > v[i - 1]) return false;
    return true;
  };
  auto show = [](const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += " " + fmt(x, 2);
    return s;
  };
  const auto magic = zoo::zoo_profile(*zoo::magic_square_space());
  const auto sg_space = zoo::slothouber_graatsma_space();
  const auto sg = zoo::zoo_profile(*sg_space);

  std::set<zoo::Packing> canonical;
  std::vector<zoo::State> stack = sg_space->initial_states();
  while (!stack.empty()) {
    const auto s = stack.back();
    stack.pop_back();
    if (sg_space->is_goal(s)) canonical.insert(zoo::canonical_packing(zoo::sg_packing(s)));
    for (auto& t : sg_space->successors(s)) stack.push_back(std::move(t));
  }
  const std::size_t brute = oracle::slothouber_graatsma_count();
  const bool m_ok = nonincreasing(magic.per_move_mean), s_ok = nonincreasing(sg.per_move_mean);
  return {m_ok && s_ok && canonical.size() == brute,
          "magic square" + show(magic.per_move_mean) + (m_ok ? "" : " (increases)") + "; slothouber-graatsma" +
              show(sg.per_move_mean) + (s_ok ? "" : " (increases)") + "; S_sg " + std::to_string(canonical.size()) +
              " vs brute force " + std::to_string(brute)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"solution-count", solution_count},     {"branching-mean", branching_mean},
      {"monotone-decay", monotone_decay},     {"cnf-size", cnf_size},
      {"effective-bf", effective_bf_sanity},  {"strategy-ordering", strategy_ordering},
      {"backtrack-shapes", backtrack_shapes}, {"landmark-tradeoff", landmark_tradeoff},
      {"eight-puzzle", eight_puzzle},         {"zoo-monotonicity", zoo_monotonicity},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
