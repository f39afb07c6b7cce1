#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "soma/canonical.hpp"
#include "soma/search.hpp"

namespace soma {

struct LandmarkEntry {
  CanonicalForm key;
  std::uint64_t extension_count = 0;  // complete solutions extending the state
  std::uint64_t multiplicity = 0;     // raw strategy-tree states with this key
  Labeling representative{};          // first raw state met in strategy order

  friend bool operator==(const LandmarkEntry&, const LandmarkEntry&) = default;
};

/// Which dead states a table keeps for pruning.
enum class AntiLandmarkScope {
  TableDepth,  // only dead states at the table depth
  AllDepths,   // every dead state met while counting extensions
};

struct BuildOptions {
  AntiLandmarkScope scope = AntiLandmarkScope::AllDepths;
  /// Stop preprocessing once this many states with a positive extension
  /// count have been evaluated (states are visited in strategy order).
  std::optional<std::uint64_t> stop_after_positive;
  /// Landmarks exposed to queries: the top entries by extension count.
  std::uint64_t landmark_count_limit = UINT64_MAX;
};

/// Canonical partial configurations at one depth with their extension counts.
/// Entries with a zero count are anti-landmarks (dead states). Immutable
/// once built; safe to share between concurrent queries.
class LandmarkTable {
 public:
  LandmarkTable() = default;

  int depth() const { return depth_; }
  const std::string& strategy_fingerprint() const { return fingerprint_; }
  AntiLandmarkScope scope() const { return scope_; }
  std::uint64_t landmark_count_limit() const { return landmark_limit_; }

  /// Sorted by key.
  const std::vector<LandmarkEntry>& entries() const { return entries_; }
  /// Landmarks in rank order: extension count descending, key ascending.
  std::vector<LandmarkEntry> landmarks() const;
  std::size_t anti_landmark_count() const;
  const LandmarkEntry* find(const CanonicalForm& key) const;

  /// Dead states recorded at depths other than the table depth, sorted.
  const std::array<std::vector<CanonicalForm>, kMaxDepth + 1>& extra_dead() const { return extra_dead_; }

  /// Canonicalizes `labels` and probes the dead-state set for `depth`.
  bool is_anti_landmark(const Labeling& labels, int depth) const;

  std::uint64_t preprocessing_nodes() const { return preprocessing_nodes_; }
  std::chrono::nanoseconds preprocessing_time() const { return preprocessing_time_; }

  /// Copy exposing at most `limit` landmarks; the dead-state set is shared.
  LandmarkTable with_landmark_limit(std::uint64_t limit) const;

  /// Versioned binary format: header (magic, version, depth, scope, limit,
  /// fingerprint, counts) then the sorted entries and the extra dead states.
  void save(std::ostream& out) const;
  static LandmarkTable load(std::istream& in);
  void save_file(const std::string& path) const;
  static LandmarkTable load_file(const std::string& path);
  nlohmann::json to_json() const;

  friend bool operator==(const LandmarkTable&, const LandmarkTable&) = default;

 private:
  friend LandmarkTable build_table(int, const StrategyConfig&, const BuildOptions&, const Catalog&);

  int depth_ = 0;
  std::string fingerprint_;
  AntiLandmarkScope scope_ = AntiLandmarkScope::AllDepths;
  std::uint64_t landmark_limit_ = UINT64_MAX;
  std::vector<LandmarkEntry> entries_;
  std::array<std::vector<CanonicalForm>, kMaxDepth + 1> extra_dead_{};
  std::vector<std::uint8_t> mirror_labels_;
  std::uint64_t preprocessing_nodes_ = 0;
  std::chrono::nanoseconds preprocessing_time_{0};
};

/// Enumerates the depth-`depth` states of the strategy tree (ordering and
/// pruning of `base_strategy`), canonicalizes them, and counts complete
/// solutions below each by exhaustive continuation.
LandmarkTable build_table(int depth, const StrategyConfig& base_strategy, const BuildOptions& options = {},
                          const Catalog& catalog = Catalog::standard());

struct TradeoffRecord {
  int depth = 0;
  std::uint64_t num_landmarks = 0;
  std::uint64_t preprocessing_nodes = 0;
  std::chrono::nanoseconds preprocessing_time{0};
  std::uint64_t query_nodes = 0;
  std::chrono::nanoseconds query_time{0};
};

struct QueryResult {
  std::optional<PuzzleState> solution;
  TradeoffRecord record;
  SearchStats stats;  // query phase only
};

/// Jumps to the table's landmarks in rank order (one node each) and resumes
/// depth-first search from them, pruning canonical matches of dead states.
/// Without landmarks it searches from the empty state with the same pruning.
/// Throws NoLandmarksError when the table holds no entries at all.
QueryResult query_solve(const LandmarkTable& table, const StrategyConfig& config,
                        const Catalog& catalog = Catalog::standard());

/// One record per (depth, landmark count), in sweep order. For each pair the
/// preprocessing visits table-depth states in strategy order until that many
/// landmarks are known, then a query runs against the resulting table.
std::vector<TradeoffRecord> tradeoff_sweep(const std::vector<int>& depths,
                                           const std::vector<std::uint64_t>& landmark_counts,
                                           const StrategyConfig& base_strategy,
                                           AntiLandmarkScope scope = AntiLandmarkScope::AllDepths,
                                           const Catalog& catalog = Catalog::standard());

std::string tradeoff_csv_header();
std::string tradeoff_csv_row(const TradeoffRecord& record);

/// Per-depth average out-degree (index d: children per depth-d node) of the
/// exhaustive strategy tree, optionally after deleting the table's dead
/// states together with their subtrees.
std::array<double, kMaxDepth> strategy_tree_branching(const StrategyConfig& strategy, const LandmarkTable* table,
                                                      const Catalog& catalog = Catalog::standard());

/// Reduced per-depth branching of the strategy the table was built with.
std::array<double, kMaxDepth> effective_bf_upper_bound(const LandmarkTable& table, const StrategyConfig& strategy,
                                                       const Catalog& catalog = Catalog::standard());

}  // namespace soma
