#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "soma/errors.hpp"
#include "soma/search.hpp"

namespace soma {

/// Exact distribution of out-degrees: out_degree -> number of states.
struct DegreeHistogram {
  std::map<int, std::uint64_t> counts;

  void add(int out_degree, std::uint64_t n = 1) { counts[out_degree] += n; }
  std::uint64_t total() const;
  double mean() const;
  double variance() const;  // population variance
  friend bool operator==(const DegreeHistogram&, const DegreeHistogram&) = default;
};

/// Out-degree histograms indexed by depth.
using DepthHistograms = std::vector<DegreeHistogram>;

std::string histogram_csv_header();
/// Rows depth,out_degree,count; with a non-empty `puzzle` a leading column is added.
std::string histogram_csv_rows(const DepthHistograms& histograms, const std::string& puzzle = {});

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

struct BranchingProfile {
  std::map<int, std::vector<int>> per_depth_samples;
  std::map<int, double> per_depth_mean;
  double overall_mean = 0.0;  // average of the per-depth means
  double pooled_mean = 0.0;   // mean over every observation
  Interval ci95;              // for overall_mean
  std::string estimator;
  std::string ci_method;

  nlohmann::json to_json() const;
};

struct SamplingOptions {
  std::uint64_t max_restarts = 100000;  // dead-end restarts allowed per sample
  int threads = 1;
};

struct WeightedObservation {
  int out_degree = 0;
  double weight = 0.0;  // product of the out-degrees met along the walk
};

/// Seed of the random stream used by walk `walk` of a sample set.
std::uint64_t walk_stream_seed(std::uint64_t seed, std::uint64_t walk);

/// Random walks in the configuration graph: from the empty state, repeatedly
/// apply a uniformly chosen legal placement (any unused piece, any position),
/// restarting on dead ends, until a depth-`depth` state is reached. Records
/// that state's out-degree. Walk i draws from a stream derived from (seed, i),
/// so the result does not depend on `threads`.
std::vector<int> sample_branching(int depth, int num_samples, std::uint64_t seed, const SamplingOptions& options = {},
                                  const Catalog& catalog = Catalog::standard());

/// Same walks, each weighted by the inverse of its probability so that the
/// weighted mean estimates the mean over root-to-depth paths.
std::vector<WeightedObservation> sample_branching_weighted(int depth, int num_samples, std::uint64_t seed,
                                                           const SamplingOptions& options = {},
                                                           const Catalog& catalog = Catalog::standard());
double weighted_mean(const std::vector<WeightedObservation>& observations);

/// Per-depth means, their average and a bias-corrected bootstrap interval
/// (resampling within each depth). Throws EmptyStatsError if a depth has no
/// observations.
BranchingProfile make_profile(std::map<int, std::vector<int>> samples, std::uint64_t seed, int resamples = 10000,
                              const std::string& estimator = "random-walk-with-restart");

/// Bias-corrected percentile bootstrap interval for the mean of `values`.
Interval bootstrap_mean_ci(const std::vector<double>& values, std::uint64_t seed, int resamples = 10000);

/// Raised when an exhaustive expansion exceeds its node budget. Carries the
/// histogram accumulated so far.
class HistogramBudgetError : public ResourceLimitError {
 public:
  HistogramBudgetError(const std::string& what, DegreeHistogram partial)
      : ResourceLimitError(what), partial_(std::move(partial)) {}
  const DegreeHistogram& partial() const { return partial_; }

 private:
  DegreeHistogram partial_;
};

/// Exact out-degree histogram over every distinct depth-`depth` state of the
/// configuration graph (sets of `depth` distinct, non-overlapping pieces).
/// Throws HistogramBudgetError when more than `state_budget` states are met.
DegreeHistogram exhaustive_branching(int depth, std::uint64_t state_budget = 50'000'000,
                                     const Catalog& catalog = Catalog::standard());

/// Smallest nonnegative b with sum_{d=0}^{6} b^d = N, to within 1e-9 N.
double effective_bf(double total_nodes);

/// Per-depth ratios b_d = C_d / C_{d-1} for d = 1..last_depth.
std::vector<double> ratio_branching(const std::vector<std::uint64_t>& nodes_per_depth, int last_depth);

struct AveragedBranching {
  std::vector<double> per_depth;  // index d-1 holds b_d
  double depth_average = 0.0;     // (1/D) sum b_d
  double node_weighted = 0.0;     // sum_{d=1}^{D} C_d / sum_{d=0}^{D-1} C_d
};

/// Both averaging conventions over the ratio definition, depths 1..last_depth.
AveragedBranching average_branching(const std::vector<std::uint64_t>& nodes_per_depth, int last_depth);

struct TreeCounts {
  std::vector<std::uint64_t> non_leaf;       // N_d
  std::vector<std::uint64_t> dead_leaf;      // L_d, leaves that are not solutions
  std::vector<std::uint64_t> solution_leaf;  // S_d
};

TreeCounts tree_counts(const TreeShape& shape);

struct NonLeafFractionResult {
  std::vector<double> fraction_per_depth;  // N_d / (N_d + L_d), NaN where skipped
  std::vector<int> skipped_depths;         // N_d + L_d == 0
  double fraction_mean = 0.0;              // over the depths that were not skipped
  std::vector<double> ratio_per_depth;     // C_d / C_{d-1}
  double ratio_mean = 0.0;
};

/// Evaluates (1/D) sum_{d=1}^{D} N_d/(N_d+L_d) literally, and the level-ratio
/// mean over the same depths. Depths with N_d + L_d = 0 are skipped and
/// listed; DivisionByZeroError is thrown only if every depth is skipped.
NonLeafFractionResult nonleaf_fraction_mean(const TreeCounts& counts, int max_depth);

enum class MatrixProtocol {
  FirstSolution,  // nodes until the first solution, averaged over seeds
  ExhaustiveTree, // nodes of the complete strategy tree
};

std::string_view to_string(MatrixProtocol protocol);

struct MatrixEntry {
  std::string strategy;
  StrategyConfig config;
  std::uint64_t seed = 0;
  std::uint64_t nodes = 0;
  double b_star = 0.0;
};

struct StrategyMatrix {
  MatrixProtocol protocol = MatrixProtocol::ExhaustiveTree;
  std::vector<MatrixEntry> runs;  // one per (config, seed)
  /// Mean b_star over the seeds of each strategy, in input order.
  std::vector<std::pair<std::string, double>> cells;

  std::string csv() const;
  /// Cell values rounded to one decimal place.
  std::string display() const;
};

struct NamedStrategy {
  std::string name;
  StrategyConfig config;
};

/// Runs every strategy once per seed (seeds only matter for randomized
/// orderings; other strategies run once).
StrategyMatrix strategy_matrix(const std::vector<NamedStrategy>& strategies, const std::vector<std::uint64_t>& seeds,
                               MatrixProtocol protocol, const Catalog& catalog = Catalog::standard());

/// Depth with the largest backtrack count (lowest depth on ties).
int modal_depth(const std::array<std::uint64_t, kMaxDepth + 1>& backtracks);

}  // namespace soma
