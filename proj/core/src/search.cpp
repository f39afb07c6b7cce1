#include "soma/search.hpp"

#include <bit>
#include <numeric>
#include <sstream>

#include "soma/canonical.hpp"
#include "soma/errors.hpp"
#include "soma/landmarks.hpp"

namespace soma {

std::string_view to_string(Ordering o) {
  switch (o) {
    case Ordering::Randomized: return "randomized";
    case Ordering::CellOrdered: return "cell_ordered";
    case Ordering::LayerOrdered: return "layer_ordered";
    case Ordering::Mcv: return "mcv";
  }
  return "unknown";
}

std::string_view to_string(StopMode m) { return m == StopMode::FirstSolution ? "first_solution" : "exhaustive"; }

Ordering parse_ordering(std::string_view text) {
  if (text == "random" || text == "randomized") return Ordering::Randomized;
  if (text == "cell" || text == "cell_ordered") return Ordering::CellOrdered;
  if (text == "layer" || text == "layer_ordered") return Ordering::LayerOrdered;
  if (text == "mcv") return Ordering::Mcv;
  throw ParseError("unknown ordering '" + std::string(text) + "'");
}

std::string StrategyConfig::fingerprint() const {
  std::ostringstream out;
  out << to_string(ordering) << (pruning ? "+prune" : "");
  if (ordering == Ordering::Randomized) out << "/seed=" << seed;
  return out.str();
}

void SearchStats::merge(const SearchStats& other) {
  for (int d = 0; d <= kMaxDepth; ++d) {
    nodes_created_per_depth[d] += other.nodes_created_per_depth[d];
    backtracks_per_depth[d] += other.backtracks_per_depth[d];
  }
  solutions_found += other.solutions_found;
  total_nodes += other.total_nodes;
  elapsed += other.elapsed;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Layer order: lowest z, then x, then y.
constexpr std::array<int, kCellCount> kLayerOrder = [] {
  std::array<int, kCellCount> order{};
  int n = 0;
  for (int z = 0; z < kSide; ++z)
    for (int x = 0; x < kSide; ++x)
      for (int y = 0; y < kSide; ++y) order[n++] = cell_index({x, y, z});
  return order;
}();

constexpr CellMask mask_where(bool (*pred)(Vec3)) {
  CellMask m = 0;
  for (int i = 0; i < kCellCount; ++i)
    if (pred(cell_at(i))) m |= cell_bit(i);
  return m;
}

constexpr CellMask kZBelowTop = mask_where([](Vec3 v) { return v.z < 2; });
constexpr CellMask kZAboveBottom = mask_where([](Vec3 v) { return v.z > 0; });
constexpr CellMask kYBelowTop = mask_where([](Vec3 v) { return v.y < 2; });
constexpr CellMask kYAboveBottom = mask_where([](Vec3 v) { return v.y > 0; });

CellMask grow(CellMask m) {
  return m | ((m & kZBelowTop) << 1) | ((m & kZAboveBottom) >> 1) | ((m & kYBelowTop) << 3) |
         ((m & kYAboveBottom) >> 3) | (m << 9) | (m >> 9);
}

bool placement_fits(const Placement& p, CellMask occupancy, std::uint32_t used) {
  return !((used >> (p.piece_id - 1)) & 1u) && !(occupancy & p.occupied);
}

int mcv_cell(CellMask occupancy, std::uint32_t used, const Catalog& catalog) {
  int best = -1;
  int best_count = 0;
  for (CellMask empty = ~occupancy & kFullMask; empty; empty &= empty - 1) {
    const int cell = std::countr_zero(empty);
    // Distinct legal (piece, orientation) pairs covering the cell.
    int count = 0;
    int last_piece = -1;
    int last_orientation = -1;
    for (const int index : catalog.covering(cell)) {
      const Placement& p = catalog.placement(index);
      if (!placement_fits(p, occupancy, used)) continue;
      if (p.piece_id != last_piece || p.orientation_index != last_orientation) {
        ++count;
        last_piece = p.piece_id;
        last_orientation = p.orientation_index;
      }
      if (best >= 0 && count >= best_count) break;
    }
    if (best < 0 || count < best_count) {
      best = cell;
      best_count = count;
      if (count == 0) break;
    }
  }
  return best;
}

class Engine {
 public:
  Engine(const StrategyConfig& config, const Catalog& catalog,
         std::array<std::vector<std::uint64_t>, kMaxDepth + 1>* degrees = nullptr)
      : config_(config), catalog_(catalog), degrees_(degrees) {}

  SearchResult run(const PuzzleState& start, bool count_start) {
    const auto t0 = std::chrono::steady_clock::now();
    labels_ = start.labels();
    path_ = start.placements().empty() ? std::vector<Placement>{} : std::vector<Placement>(start.placements().begin(),
                                                                                            start.placements().end());
    if (count_start) count_node(start.depth());
    expand(start.occupancy(), start.used_pieces(), path_hash(start, config_.seed, catalog_), start.depth());
    result_.stats.elapsed = std::chrono::steady_clock::now() - t0;
    return std::move(result_);
  }

 private:
  void count_node(int depth) {
    ++result_.stats.nodes_created_per_depth[depth];
    ++result_.stats.total_nodes;
  }

  void expand(CellMask occupancy, std::uint32_t used, std::uint64_t hash, int depth) {
    if (occupancy == kFullMask) {
      record_degree(depth, 0);
      ++result_.stats.solutions_found;
      PuzzleState s;
      for (const Placement& p : path_) s = apply(s, p);
      result_.solutions.push_back(std::move(s));
      if (config_.stop_mode == StopMode::FirstSolution) stop_ = true;
      return;
    }
    const int cell = select_cell(occupancy, used, config_, hash, catalog_);
    int children = 0;
    for (const int index : catalog_.covering(cell)) {
      const Placement& p = catalog_.placement(index);
      if (!placement_fits(p, occupancy, used)) continue;
      const CellMask child = occupancy | p.occupied;
      if (config_.pruning && void_prune(child)) continue;
      set_labels(p, static_cast<std::uint8_t>(p.piece_id));
      if (config_.landmark_table && config_.landmark_table->is_anti_landmark(labels_, depth + 1)) {
        set_labels(p, 0);
        continue;
      }
      count_node(depth + 1);
      ++children;
      path_.push_back(p);
      expand(child, used | (1u << (p.piece_id - 1)), extend_path_hash(hash, index), depth + 1);
      path_.pop_back();
      set_labels(p, 0);
      if (stop_) return;
    }
    record_degree(depth, children);
    if (depth > 0) ++result_.stats.backtracks_per_depth[depth];
  }

  void record_degree(int depth, int children) {
    if (!degrees_) return;
    auto& row = (*degrees_)[depth];
    if (row.size() <= static_cast<std::size_t>(children)) row.resize(children + 1);
    ++row[children];
  }

  void set_labels(const Placement& p, std::uint8_t label) {
    for (CellMask m = p.occupied; m; m &= m - 1) labels_[std::countr_zero(m)] = label;
  }

  const StrategyConfig& config_;
  const Catalog& catalog_;
  std::array<std::vector<std::uint64_t>, kMaxDepth + 1>* degrees_;
  SearchResult result_;
  Labeling labels_{};
  std::vector<Placement> path_;
  bool stop_ = false;
};

}  // namespace

std::uint64_t root_path_hash(std::uint64_t seed) { return splitmix64(seed); }

std::uint64_t extend_path_hash(std::uint64_t hash, int placement_index) {
  return splitmix64(hash ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(placement_index + 1)));
}

std::uint64_t path_hash(const PuzzleState& state, std::uint64_t seed, const Catalog& catalog) {
  std::uint64_t h = root_path_hash(seed);
  for (const Placement& p : state.placements()) {
    const int index = p.index >= 0 ? p.index : catalog.find(p.piece_id, p.occupied);
    h = extend_path_hash(h, index);
  }
  return h;
}

int select_cell(CellMask occupancy, std::uint32_t used, const StrategyConfig& config, std::uint64_t hash,
                const Catalog& catalog) {
  const CellMask empty = ~occupancy & kFullMask;
  if (!empty) return -1;
  switch (config.ordering) {
    case Ordering::CellOrdered:
      return std::countr_zero(empty);
    case Ordering::LayerOrdered:
      for (const int cell : kLayerOrder)
        if (empty & cell_bit(cell)) return cell;
      return -1;
    case Ordering::Mcv:
      return mcv_cell(occupancy, used, catalog);
    case Ordering::Randomized: {
      const auto n = static_cast<std::uint64_t>(std::popcount(empty));
      auto k = static_cast<int>((static_cast<unsigned __int128>(splitmix64(hash)) * n) >> 64);
      CellMask m = empty;
      while (k-- > 0) m &= m - 1;
      return std::countr_zero(m);
    }
  }
  return -1;
}

std::vector<Placement> successors(const PuzzleState& state, const StrategyConfig& config, const Catalog& catalog) {
  std::vector<Placement> out;
  const int cell = select_cell(state.occupancy(), state.used_pieces(), config, path_hash(state, config.seed, catalog),
                               catalog);
  if (cell < 0) return out;
  for (const int index : catalog.covering(cell)) {
    const Placement& p = catalog.placement(index);
    if (placement_fits(p, state.occupancy(), state.used_pieces())) out.push_back(p);
  }
  return out;
}

bool void_prune(CellMask occupancy) {
  CellMask empty = ~occupancy & kFullMask;
  while (empty) {
    CellMask component = empty & (~empty + 1);
    for (;;) {
      const CellMask next = grow(component) & empty;
      if (next == component) break;
      component = next;
    }
    if (std::popcount(component) <= 2) return true;
    empty &= ~component;
  }
  return false;
}

SearchResult solve(const StrategyConfig& config, const Catalog& catalog) {
  return solve_from(PuzzleState{}, config, catalog, true);
}

SearchResult solve_from(const PuzzleState& start, const StrategyConfig& config, const Catalog& catalog,
                        bool count_start) {
  Engine engine(config, catalog);
  return engine.run(start, count_start);
}

TreeShape tree_shape(const StrategyConfig& config, const Catalog& catalog) {
  StrategyConfig exhaustive = config;
  exhaustive.stop_mode = StopMode::Exhaustive;
  TreeShape shape;
  Engine engine(exhaustive, catalog, &shape.out_degree_counts);
  shape.stats = engine.run(PuzzleState{}, true).stats;
  return shape;
}

std::array<double, kMaxDepth + 1> backtrack_histogram(const SearchStats& stats) {
  const std::uint64_t total =
      std::accumulate(stats.backtracks_per_depth.begin(), stats.backtracks_per_depth.end(), std::uint64_t{0});
  if (total == 0) throw EmptyStatsError("no backtracks recorded");
  std::array<double, kMaxDepth + 1> out{};
  for (int d = 0; d <= kMaxDepth; ++d) out[d] = static_cast<double>(stats.backtracks_per_depth[d]) / total;
  return out;
}

nlohmann::json to_json(const SearchStats& stats, const StrategyConfig& config) {
  nlohmann::json j;
  j["config"] = {{"ordering", to_string(config.ordering)},
                 {"pruning", config.pruning},
                 {"landmarks", static_cast<bool>(config.landmark_table)},
                 {"stop_mode", to_string(config.stop_mode)},
                 {"seed", config.seed}};
  j["seed"] = config.seed;
  j["generator"] = kGeneratorName;
  j["nodes_created_per_depth"] = stats.nodes_created_per_depth;
  j["backtracks_per_depth"] = stats.backtracks_per_depth;
  j["solutions_found"] = stats.solutions_found;
  j["total_nodes"] = stats.total_nodes;
  j["wall_time_ms"] = std::chrono::duration<double, std::milli>(stats.elapsed).count();
  return j;
}

std::string stats_csv_header() { return "ordering,pruning,landmarks,seed,depth,nodes,backtracks\n"; }

std::string stats_csv_rows(const SearchStats& stats, const StrategyConfig& config) {
  std::ostringstream out;
  for (int d = 0; d <= kMaxDepth; ++d) {
    out << to_string(config.ordering) << ',' << (config.pruning ? 1 : 0) << ',' << (config.landmark_table ? 1 : 0)
        << ',' << config.seed << ',' << d << ',' << stats.nodes_created_per_depth[d] << ','
        << stats.backtracks_per_depth[d] << '\n';
  }
  return out.str();
}

}  // namespace soma
