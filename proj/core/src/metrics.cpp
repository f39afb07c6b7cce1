#include "soma/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>

namespace soma {

std::uint64_t DegreeHistogram::total() const {
  std::uint64_t n = 0;
  for (const auto& [k, c] : counts) n += c;
  return n;
}

double DegreeHistogram::mean() const {
  const std::uint64_t n = total();
  if (n == 0) throw EmptyStatsError("empty histogram");
  double sum = 0.0;
  for (const auto& [k, c] : counts) sum += static_cast<double>(k) * static_cast<double>(c);
  return sum / static_cast<double>(n);
}

double DegreeHistogram::variance() const {
  const double m = mean();
  double sum = 0.0;
  for (const auto& [k, c] : counts) sum += (k - m) * (k - m) * static_cast<double>(c);
  return sum / static_cast<double>(total());
}

std::string histogram_csv_header() { return "depth,out_degree,count\n"; }

std::string histogram_csv_rows(const DepthHistograms& histograms, const std::string& puzzle) {
  std::ostringstream out;
  for (std::size_t d = 0; d < histograms.size(); ++d)
    for (const auto& [k, c] : histograms[d].counts) {
      if (!puzzle.empty()) out << puzzle << ',';
      out << d << ',' << k << ',' << c << '\n';
    }
  return out.str();
}

nlohmann::json BranchingProfile::to_json() const {
  nlohmann::json j;
  j["estimator"] = estimator;
  j["ci_method"] = ci_method;
  j["overall_mean"] = overall_mean;
  j["pooled_mean"] = pooled_mean;
  j["ci95"] = {ci95.low, ci95.high};
  nlohmann::json depths = nlohmann::json::array();
  for (const auto& [d, m] : per_depth_mean)
    depths.push_back({{"depth", d}, {"mean", m}, {"samples", per_depth_samples.at(d).size()}});
  j["per_depth"] = depths;
  return j;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Placement masks grouped by catalog slot.
std::vector<std::vector<CellMask>> masks_by_piece(const Catalog& catalog) {
  std::vector<std::vector<CellMask>> out;
  for (const Piece& piece : catalog.pieces()) {
    std::vector<CellMask> masks;
    for (const Placement& p : catalog.placements_of(piece.id)) masks.push_back(p.occupied);
    out.push_back(std::move(masks));
  }
  return out;
}

int out_degree(const std::vector<std::vector<CellMask>>& masks, CellMask occupancy, std::uint32_t used) {
  int n = 0;
  for (std::size_t slot = 0; slot < masks.size(); ++slot) {
    if ((used >> slot) & 1u) continue;
    for (const CellMask m : masks[slot]) n += (m & occupancy) == 0;
  }
  return n;
}

WeightedObservation one_walk(int depth, std::mt19937_64& rng, const std::vector<std::vector<CellMask>>& masks,
                             std::uint64_t max_restarts) {
  std::vector<std::pair<int, CellMask>> legal;
  for (std::uint64_t attempt = 0; attempt <= max_restarts; ++attempt) {
    CellMask occupancy = 0;
    std::uint32_t used = 0;
    double weight = 1.0;
    bool dead = false;
    for (int d = 0; d < depth; ++d) {
      legal.clear();
      for (std::size_t slot = 0; slot < masks.size(); ++slot) {
        if ((used >> slot) & 1u) continue;
        for (const CellMask m : masks[slot])
          if (!(m & occupancy)) legal.emplace_back(static_cast<int>(slot), m);
      }
      if (legal.empty()) {
        dead = true;
        break;
      }
      weight *= static_cast<double>(legal.size());
      std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
      const auto [slot, m] = legal[pick(rng)];
      occupancy |= m;
      used |= 1u << slot;
    }
    if (!dead) return {out_degree(masks, occupancy, used), weight};
  }
  throw SamplingExhaustedError("no depth-" + std::to_string(depth) + " state reached after " +
                               std::to_string(max_restarts) + " restarts");
}

std::vector<WeightedObservation> run_walks(int depth, int num_samples, std::uint64_t seed,
                                           const SamplingOptions& options, const Catalog& catalog) {
  if (depth < 1 || depth > kMaxDepth - 1) throw std::invalid_argument("sampling depth must be in 1..6");
  if (num_samples < 1) throw std::invalid_argument("num_samples must be positive");
  const auto masks = masks_by_piece(catalog);
  std::vector<WeightedObservation> out(num_samples);
  const int threads = std::max(1, std::min(options.threads, num_samples));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](int t) {
    try {
      for (int i = t; i < num_samples; i += threads) {
        std::mt19937_64 rng(walk_stream_seed(seed, static_cast<std::uint64_t>(i)));
        out[i] = one_walk(depth, rng, masks, options.max_restarts);
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }

// Bias-corrected percentile interval from bootstrap replicates.
Interval bias_corrected(std::vector<double> boot, double estimate) {
  const auto b = static_cast<double>(boot.size());
  const double below = static_cast<double>(std::count_if(boot.begin(), boot.end(), [&](double v) { return v < estimate; }));
  const double p0 = std::clamp(below / b, 0.5 / b, 1.0 - 0.5 / b);
  const double z0 = normal_quantile(p0);
  const double z = normal_quantile(0.975);
  std::sort(boot.begin(), boot.end());
  auto at = [&](double q) {
    const auto i = static_cast<std::size_t>(std::clamp(std::floor(q * (b - 1.0) + 0.5), 0.0, b - 1.0));
    return boot[i];
  };
  return {at(normal_cdf(2.0 * z0 - z)), at(normal_cdf(2.0 * z0 + z))};
}

}  // namespace

std::uint64_t walk_stream_seed(std::uint64_t seed, std::uint64_t walk) { return mix(mix(seed) ^ walk); }

std::vector<int> sample_branching(int depth, int num_samples, std::uint64_t seed, const SamplingOptions& options,
                                  const Catalog& catalog) {
  const auto walks = run_walks(depth, num_samples, seed, options, catalog);
  std::vector<int> out;
  out.reserve(walks.size());
  for (const auto& w : walks) out.push_back(w.out_degree);
  return out;
}

std::vector<WeightedObservation> sample_branching_weighted(int depth, int num_samples, std::uint64_t seed,
                                                           const SamplingOptions& options, const Catalog& catalog) {
  return run_walks(depth, num_samples, seed, options, catalog);
}

double weighted_mean(const std::vector<WeightedObservation>& observations) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& o : observations) {
    num += o.weight * o.out_degree;
    den += o.weight;
  }
  if (den == 0.0) throw EmptyStatsError("no weighted observations");
  return num / den;
}

Interval bootstrap_mean_ci(const std::vector<double>& values, std::uint64_t seed, int resamples) {
  if (values.empty()) throw EmptyStatsError("no observations");
  const double estimate = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  std::mt19937_64 rng(mix(seed));
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> boot(resamples);
  for (double& out : boot) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += values[pick(rng)];
    out = sum / values.size();
  }
  return bias_corrected(std::move(boot), estimate);
}

BranchingProfile make_profile(std::map<int, std::vector<int>> samples, std::uint64_t seed, int resamples,
                              const std::string& estimator) {
  if (samples.empty()) throw EmptyStatsError("no depths sampled");
  BranchingProfile profile;
  profile.estimator = estimator;
  profile.ci_method = "bias-corrected percentile bootstrap, " + std::to_string(resamples) +
                      " resamples stratified by depth, seed " + std::to_string(seed);
  double pooled = 0.0;
  std::size_t pooled_n = 0;
  for (const auto& [d, xs] : samples) {
    if (xs.empty()) throw EmptyStatsError("no samples at depth " + std::to_string(d));
    const double sum = std::accumulate(xs.begin(), xs.end(), 0.0);
    profile.per_depth_mean[d] = sum / xs.size();
    pooled += sum;
    pooled_n += xs.size();
  }
  double overall = 0.0;
  for (const auto& [d, m] : profile.per_depth_mean) overall += m;
  profile.overall_mean = overall / profile.per_depth_mean.size();
  profile.pooled_mean = pooled / pooled_n;

  std::mt19937_64 rng(mix(seed));
  std::vector<double> boot(resamples);
  for (double& out : boot) {
    double total = 0.0;
    for (const auto& [d, xs] : samples) {
      std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
      double sum = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) sum += xs[pick(rng)];
      total += sum / xs.size();
    }
    out = total / samples.size();
  }
  profile.ci95 = bias_corrected(std::move(boot), profile.overall_mean);
  profile.per_depth_samples = std::move(samples);
  return profile;
}

DegreeHistogram exhaustive_branching(int depth, std::uint64_t state_budget, const Catalog& catalog) {
  if (depth < 0 || depth > kMaxDepth) throw std::invalid_argument("depth must be in 0..7");
  const auto masks = masks_by_piece(catalog);
  const int slots = static_cast<int>(masks.size());
  DegreeHistogram hist;
  std::uint64_t states = 0;
  // Pieces are chosen in increasing slot order so every state is met once.
  auto rec = [&](auto&& self, int first, int remaining, CellMask occupancy, std::uint32_t used) -> void {
    if (remaining == 0) {
      if (++states > state_budget)
        throw HistogramBudgetError("state budget of " + std::to_string(state_budget) + " exceeded", hist);
      hist.add(out_degree(masks, occupancy, used));
      return;
    }
    for (int slot = first; slot <= slots - remaining; ++slot)
      for (const CellMask m : masks[slot])
        if (!(m & occupancy)) self(self, slot + 1, remaining - 1, occupancy | m, used | (1u << slot));
  };
  rec(rec, 0, depth, 0, 0);
  return hist;
}

double effective_bf(double total_nodes) {
  if (!(total_nodes >= 1.0)) throw std::invalid_argument("effective_bf needs N >= 1");
  auto f = [&](double x) {
    double sum = 0.0;
    double power = 1.0;
    for (int d = 0; d <= 6; ++d) {
      sum += power;
      power *= x;
    }
    return sum - total_nodes;
  };
  const double guess = std::round(std::pow(total_nodes, 1.0 / 6.0));
  for (const double candidate : {guess - 1.0, guess, guess + 1.0})
    if (candidate >= 0.0 && f(candidate) == 0.0) return candidate;
  double lo = 0.0;
  double hi = std::max(1.0, std::pow(total_nodes, 1.0 / 6.0));
  while (true) {
    const double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return std::abs(f(lo)) <= std::abs(f(hi)) ? lo : hi;
}

std::vector<double> ratio_branching(const std::vector<std::uint64_t>& nodes, int last_depth) {
  if (last_depth < 1 || static_cast<std::size_t>(last_depth) >= nodes.size())
    throw std::invalid_argument("last_depth out of range");
  std::vector<double> out;
  for (int d = 1; d <= last_depth; ++d) {
    if (nodes[d - 1] == 0) throw DivisionByZeroError("no nodes at depth " + std::to_string(d - 1));
    out.push_back(static_cast<double>(nodes[d]) / static_cast<double>(nodes[d - 1]));
  }
  return out;
}

AveragedBranching average_branching(const std::vector<std::uint64_t>& nodes, int last_depth) {
  AveragedBranching out;
  out.per_depth = ratio_branching(nodes, last_depth);
  out.depth_average = std::accumulate(out.per_depth.begin(), out.per_depth.end(), 0.0) / last_depth;
  double children = 0.0;
  double parents = 0.0;
  for (int d = 1; d <= last_depth; ++d) {
    children += static_cast<double>(nodes[d]);
    parents += static_cast<double>(nodes[d - 1]);
  }
  out.node_weighted = children / parents;
  return out;
}

TreeCounts tree_counts(const TreeShape& shape) {
  TreeCounts out;
  for (int d = 0; d <= kMaxDepth; ++d) {
    const auto& row = shape.out_degree_counts[d];
    std::uint64_t leaves = row.empty() ? 0 : row[0];
    std::uint64_t inner = 0;
    for (std::size_t k = 1; k < row.size(); ++k) inner += row[k];
    out.non_leaf.push_back(inner);
    // Only complete assemblies sit at the last depth.
    out.dead_leaf.push_back(d == kMaxDepth ? 0 : leaves);
    out.solution_leaf.push_back(d == kMaxDepth ? leaves : 0);
  }
  return out;
}

NonLeafFractionResult nonleaf_fraction_mean(const TreeCounts& counts, int max_depth) {
  if (max_depth < 1) throw std::invalid_argument("D must be at least 1");
  const auto n = static_cast<std::size_t>(max_depth) + 1;
  if (counts.non_leaf.size() < n || counts.dead_leaf.size() < n || counts.solution_leaf.size() < n)
    throw std::invalid_argument("tree counts shorter than D");
  NonLeafFractionResult out;
  auto created = [&](int d) { return counts.non_leaf[d] + counts.dead_leaf[d] + counts.solution_leaf[d]; };
  double fraction_sum = 0.0;
  int used = 0;
  double ratio = 0.0;
  int ratio_used = 0;
  for (int d = 1; d <= max_depth; ++d) {
    const std::uint64_t denom = counts.non_leaf[d] + counts.dead_leaf[d];
    if (denom == 0) {
      out.skipped_depths.push_back(d);
      out.fraction_per_depth.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      const double v = static_cast<double>(counts.non_leaf[d]) / static_cast<double>(denom);
      out.fraction_per_depth.push_back(v);
      fraction_sum += v;
      ++used;
    }
    if (created(d - 1) == 0) {
      out.ratio_per_depth.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      const double r = static_cast<double>(created(d)) / static_cast<double>(created(d - 1));
      out.ratio_per_depth.push_back(r);
      ratio += r;
      ++ratio_used;
    }
  }
  if (used == 0) throw DivisionByZeroError("N_d + L_d is zero at every depth");
  out.fraction_mean = fraction_sum / used;
  out.ratio_mean = ratio_used ? ratio / ratio_used : std::numeric_limits<double>::quiet_NaN();
  return out;
}

std::string_view to_string(MatrixProtocol protocol) {
  return protocol == MatrixProtocol::FirstSolution ? "first_solution" : "exhaustive_tree";
}

std::string StrategyMatrix::csv() const {
  std::ostringstream out;
  out << "strategy,ordering,pruning,landmarks,seed,N,b_star\n" << std::setprecision(17);
  for (const MatrixEntry& e : runs)
    out << e.strategy << ',' << to_string(e.config.ordering) << ',' << (e.config.pruning ? 1 : 0) << ','
        << (e.config.landmark_table ? 1 : 0) << ',' << e.seed << ',' << e.nodes << ',' << e.b_star << '\n';
  return out.str();
}

std::string StrategyMatrix::display() const {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1);
  for (const auto& [name, b] : cells) out << name << '\t' << b << '\n';
  return out.str();
}

StrategyMatrix strategy_matrix(const std::vector<NamedStrategy>& strategies, const std::vector<std::uint64_t>& seeds,
                               MatrixProtocol protocol, const Catalog& catalog) {
  StrategyMatrix matrix;
  matrix.protocol = protocol;
  for (const NamedStrategy& s : strategies) {
    std::vector<std::uint64_t> run_seeds{s.config.seed};
    if (s.config.ordering == Ordering::Randomized && !seeds.empty()) run_seeds = seeds;
    double sum = 0.0;
    for (const std::uint64_t seed : run_seeds) {
      StrategyConfig config = s.config;
      config.seed = seed;
      config.stop_mode = protocol == MatrixProtocol::FirstSolution ? StopMode::FirstSolution : StopMode::Exhaustive;
      const SearchResult r = solve(config, catalog);
      MatrixEntry e{s.name, config, seed, r.stats.total_nodes, effective_bf(static_cast<double>(r.stats.total_nodes))};
      sum += e.b_star;
      matrix.runs.push_back(std::move(e));
    }
    matrix.cells.emplace_back(s.name, sum / run_seeds.size());
  }
  return matrix;
}

int modal_depth(const std::array<std::uint64_t, kMaxDepth + 1>& backtracks) {
  return static_cast<int>(std::max_element(backtracks.begin(), backtracks.end()) - backtracks.begin());
}

}  // namespace soma
