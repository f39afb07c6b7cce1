#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "soma/metrics.hpp"

namespace soma::zoo {

using State = std::vector<std::int16_t>;

/// A puzzle as a search space. Depth is the number of moves made from an
/// initial state. Solution leaves (goal states without successors) are
/// reported separately and left out of the branching statistics.
class PuzzleSpace {
 public:
  virtual ~PuzzleSpace() = default;
  virtual std::string name() const = 0;
  virtual std::vector<State> initial_states() const = 0;
  /// Deterministic, in a fixed order.
  virtual std::vector<State> successors(const State& state) const = 0;
  virtual bool is_goal(const State& state) const = 0;
  virtual bool non_backtracking() const { return false; }
  /// Largest depth worth profiling (piece count for dissection puzzles).
  virtual int horizon() const = 0;
  /// Minimum number of moves needed from the worst-case position, when known.
  virtual std::optional<int> depth_measure() const { return std::nullopt; }
};

// ---- 8-puzzle -------------------------------------------------------------

/// State: tiles of cells 0..8 row-major (0 is the blank), then the blank's
/// previous position or -1. Initial state is the solved board 1..8,0.
std::unique_ptr<PuzzleSpace> eight_puzzle_space(bool non_backtracking, int horizon = 20);

enum class SquareKind { Corner, Side, Center };
SquareKind square_kind(int position);
int blank_position(const State& state);

struct DiameterResult {
  int eccentricity = 0;            // largest distance from the goal
  std::size_t reachable = 0;       // states reached by the search
  std::vector<State> farthest;     // every state at that distance
};

/// Breadth-first search over tile arrangements from the solved board.
DiameterResult eight_puzzle_diameter();
/// Moves between two boards (previous-position entries ignored); -1 if unreachable.
int eight_puzzle_distance(const State& from, const State& to);

// ---- dissection puzzles ---------------------------------------------------

/// Digits 1..9 written into a 3x3 grid one cell at a time in row-major
/// order. A move is legal unless it completes a row, column or diagonal whose
/// sum is not 15. State: nine digits, 0 for empty.
std::unique_ptr<PuzzleSpace> magic_square_space();

/// Six 1x2x2 blocks and three unit cubes packed into the 3x3x3 cube, each
/// move covering the lowest empty cell. State: 27 cell labels (blocks 1..6,
/// unit cubes 7..9 in placement order, 0 empty).
std::unique_ptr<PuzzleSpace> slothouber_graatsma_space();

/// A packing as (piece kind, cell mask) pairs, sorted.
using Packing = std::vector<std::pair<int, CellMask>>;
/// Smallest sorted packing over the 48 cube symmetries.
Packing canonical_packing(Packing packing);
/// Packing of a complete Slothouber-Graatsma state (kind 1 block, kind 2 unit cube).
Packing sg_packing(const State& state);

/// Soma through the generic interface. With `strategy` the successors are
/// those of that (non-randomized) strategy; without it every legal placement
/// of every unused piece is a successor, in catalog order.
std::unique_ptr<PuzzleSpace> soma_space(std::optional<StrategyConfig> strategy = std::nullopt,
                                        const Catalog& catalog = Catalog::standard());

// ---- profiling ------------------------------------------------------------

struct ExhaustiveTree {
  DepthHistograms histograms;        // by state depth, solution leaves excluded
  std::vector<std::uint64_t> goals;  // solution leaves per depth
};

/// Visits every path from the initial states up to `max_depth` moves.
/// Throws HistogramBudgetError after `node_budget` nodes.
ExhaustiveTree exhaustive_tree(const PuzzleSpace& space, int max_depth, std::uint64_t node_budget = 100'000'000);

/// Random walks with restart, as in soma::sample_branching: walk i uses the
/// stream walk_stream_seed(seed, i) and picks successors uniformly. A walk
/// restarts when it dead-ends before `depth` or ends on a solution leaf.
/// Records the out-degree of the state reached.
std::vector<int> sample_space(const PuzzleSpace& space, int depth, int num_samples, std::uint64_t seed,
                              std::uint64_t max_restarts = 100000);

struct ProfileSettings {
  bool exhaustive = true;
  int max_depth = -1;  // -1: the space's horizon
  int samples = 2000;
  std::uint64_t seed = 1;
  std::uint64_t node_budget = 100'000'000;
};

struct ZooProfile {
  std::string puzzle;
  std::string estimator;
  /// Entry m-1 is the mean number of choices for move m, i.e. the mean
  /// out-degree of depth m-1 states other than solution leaves.
  std::vector<double> per_move_mean;
  DepthHistograms histograms;       // by state depth
  std::optional<int> depth_measure;

  nlohmann::json to_json() const;
};

ZooProfile zoo_profile(const PuzzleSpace& space, const ProfileSettings& settings = {});

/// Histogram CSV with a leading puzzle column.
std::string zoo_csv_header();
std::string zoo_csv_rows(const ZooProfile& profile);

}  // namespace soma::zoo
