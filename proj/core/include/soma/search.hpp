#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "soma/state.hpp"

namespace soma {

class LandmarkTable;

inline constexpr int kMaxDepth = kPieceCount;

enum class Ordering { Randomized, CellOrdered, LayerOrdered, Mcv };
enum class StopMode { FirstSolution, Exhaustive };

std::string_view to_string(Ordering o);
std::string_view to_string(StopMode m);
/// Accepts the long names and the short CLI spellings (random, cell, layer, mcv).
Ordering parse_ordering(std::string_view text);

/// Name of the pseudo-random stream used by the randomized ordering. Each
/// node draws from splitmix64 applied to a hash of (seed, placement path),
/// so a node's choice does not depend on the order the tree is visited in.
inline constexpr std::string_view kGeneratorName = "splitmix64-path-hash";

struct StrategyConfig {
  Ordering ordering = Ordering::CellOrdered;
  bool pruning = false;
  std::shared_ptr<const LandmarkTable> landmark_table;  // anti-landmark pruning when set
  std::uint64_t seed = 0;
  StopMode stop_mode = StopMode::FirstSolution;

  /// Stable description of ordering, pruning and seed (no table, no stop mode).
  std::string fingerprint() const;
};

struct SearchStats {
  std::array<std::uint64_t, kMaxDepth + 1> nodes_created_per_depth{};
  std::array<std::uint64_t, kMaxDepth + 1> backtracks_per_depth{};
  std::uint64_t solutions_found = 0;
  std::uint64_t total_nodes = 0;
  std::chrono::nanoseconds elapsed{0};

  void merge(const SearchStats& other);
};

struct SearchResult {
  std::vector<PuzzleState> solutions;
  SearchStats stats;
};

/// The empty cell the ordering commits to at this state, or -1 when full.
/// `path_hash` only matters for the randomized ordering.
int select_cell(CellMask occupancy, std::uint32_t used_pieces, const StrategyConfig& config, std::uint64_t path_hash,
                const Catalog& catalog = Catalog::standard());

/// Legal placements covering the selected cell, in catalog order. An empty
/// list is a dead end.
std::vector<Placement> successors(const PuzzleState& state, const StrategyConfig& config,
                                  const Catalog& catalog = Catalog::standard());

/// True when the empty cells contain a face-connected component of size 1 or 2.
bool void_prune(CellMask occupancy);
inline bool void_prune(const PuzzleState& state) { return void_prune(state.occupancy()); }

/// Depth-first search from the empty state.
SearchResult solve(const StrategyConfig& config, const Catalog& catalog = Catalog::standard());

/// Depth-first search from `start`. The start node is counted at its own
/// depth; with `count_start == false` it is treated as already paid for.
SearchResult solve_from(const PuzzleState& start, const StrategyConfig& config,
                        const Catalog& catalog = Catalog::standard(), bool count_start = true);

/// The complete strategy tree of `config` (stop mode is ignored) with, for
/// each depth, out_degree_counts[d][k] = number of depth-d nodes with k children.
struct TreeShape {
  SearchStats stats;
  std::array<std::vector<std::uint64_t>, kMaxDepth + 1> out_degree_counts;
};
TreeShape tree_shape(const StrategyConfig& config, const Catalog& catalog = Catalog::standard());

/// Backtrack frequencies per depth, normalized to sum to 1. Throws
/// EmptyStatsError when no backtrack was recorded.
std::array<double, kMaxDepth + 1> backtrack_histogram(const SearchStats& stats);

/// Path hash of a state reached by applying its placements in order.
std::uint64_t path_hash(const PuzzleState& state, std::uint64_t seed, const Catalog& catalog = Catalog::standard());
std::uint64_t extend_path_hash(std::uint64_t hash, int placement_index);
std::uint64_t root_path_hash(std::uint64_t seed);

nlohmann::json to_json(const SearchStats& stats, const StrategyConfig& config);
/// CSV with one row per depth: ordering,pruning,landmarks,seed,depth,nodes,backtracks.
std::string stats_csv_header();
std::string stats_csv_rows(const SearchStats& stats, const StrategyConfig& config);

}  // namespace soma
