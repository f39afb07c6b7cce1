#include "soma/zoo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "soma/landmarks.hpp"

namespace soma::zoo {

// ---- 8-puzzle -------------------------------------------------------------

namespace {

constexpr int kBoard = 9;
constexpr int kPrev = 9;

std::vector<int> grid_neighbors(int pos) {
  std::vector<int> out;
  const int r = pos / 3;
  const int c = pos % 3;
  if (r > 0) out.push_back(pos - 3);
  if (r < 2) out.push_back(pos + 3);
  if (c > 0) out.push_back(pos - 1);
  if (c < 2) out.push_back(pos + 1);
  return out;
}

State solved_board() {
  State s(kBoard + 1);
  for (int i = 0; i < 8; ++i) s[i] = static_cast<std::int16_t>(i + 1);
  s[8] = 0;
  s[kPrev] = -1;
  return s;
}

std::uint64_t board_key(const State& s) {
  std::uint64_t key = 0;
  for (int i = 0; i < kBoard; ++i) key = key << 4 | static_cast<std::uint64_t>(s[i]);
  return key;
}

class EightPuzzle final : public PuzzleSpace {
 public:
  EightPuzzle(bool non_backtracking, int horizon) : nb_(non_backtracking), horizon_(horizon) {}

  std::string name() const override { return nb_ ? "eight_puzzle_nb" : "eight_puzzle"; }
  std::vector<State> initial_states() const override { return {solved_board()}; }
  bool non_backtracking() const override { return nb_; }
  int horizon() const override { return horizon_; }
  std::optional<int> depth_measure() const override { return eight_puzzle_diameter().eccentricity; }

  bool is_goal(const State& s) const override { return std::equal(s.begin(), s.begin() + kBoard, solved_board().begin()); }

  std::vector<State> successors(const State& s) const override {
    const int blank = blank_position(s);
    std::vector<State> out;
    for (const int next : grid_neighbors(blank)) {
      if (nb_ && next == s[kPrev]) continue;
      State t = s;
      std::swap(t[blank], t[next]);
      t[kPrev] = static_cast<std::int16_t>(blank);
      out.push_back(std::move(t));
    }
    return out;
  }

 private:
  bool nb_;
  int horizon_;
};

}  // namespace

std::unique_ptr<PuzzleSpace> eight_puzzle_space(bool non_backtracking, int horizon) {
  return std::make_unique<EightPuzzle>(non_backtracking, horizon);
}

SquareKind square_kind(int position) {
  if (position == 4) return SquareKind::Center;
  return position % 2 == 0 ? SquareKind::Corner : SquareKind::Side;
}

int blank_position(const State& state) {
  for (int i = 0; i < kBoard; ++i)
    if (state[i] == 0) return i;
  throw std::invalid_argument("board has no blank");
}

namespace {

// Distances from `from` to every reachable board, keyed by board_key.
std::unordered_map<std::uint64_t, int> bfs(const State& from, std::deque<State>* last_layer = nullptr) {
  const EightPuzzle space(false, 0);
  std::unordered_map<std::uint64_t, int> dist;
  std::deque<State> queue{from};
  dist[board_key(from)] = 0;
  while (!queue.empty()) {
    State s = std::move(queue.front());
    queue.pop_front();
    const int d = dist[board_key(s)];
    for (State& t : space.successors(s)) {
      if (dist.emplace(board_key(t), d + 1).second) queue.push_back(std::move(t));
    }
    if (last_layer) {
      if (!last_layer->empty() && dist[board_key(last_layer->front())] < d) last_layer->clear();
      last_layer->push_back(std::move(s));
    }
  }
  return dist;
}

}  // namespace

DiameterResult eight_puzzle_diameter() {
  std::deque<State> last;
  const auto dist = bfs(solved_board(), &last);
  DiameterResult out;
  out.reachable = dist.size();
  for (const auto& [k, d] : dist) out.eccentricity = std::max(out.eccentricity, d);
  for (State& s : last) {
    s[kPrev] = -1;
    out.farthest.push_back(std::move(s));
  }
  std::sort(out.farthest.begin(), out.farthest.end());
  return out;
}

int eight_puzzle_distance(const State& from, const State& to) {
  const auto dist = bfs(from);
  const auto it = dist.find(board_key(to));
  return it == dist.end() ? -1 : it->second;
}

// ---- magic square ---------------------------------------------------------

namespace {

constexpr int kLines[8][3] = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8}, {0, 4, 8}, {2, 4, 6}};

class MagicSquare final : public PuzzleSpace {
 public:
  std::string name() const override { return "magic_square"; }
  std::vector<State> initial_states() const override { return {State(9, 0)}; }
  int horizon() const override { return 9; }
  std::optional<int> depth_measure() const override { return 9; }

  bool is_goal(const State& s) const override {
    return std::none_of(s.begin(), s.end(), [](std::int16_t v) { return v == 0; });
  }

  std::vector<State> successors(const State& s) const override {
    const auto next = std::find(s.begin(), s.end(), 0);
    std::vector<State> out;
    if (next == s.end()) return out;
    const auto cell = static_cast<int>(next - s.begin());
    for (std::int16_t digit = 1; digit <= 9; ++digit) {
      if (std::find(s.begin(), s.end(), digit) != s.end()) continue;
      State t = s;
      t[cell] = digit;
      if (lines_ok(t)) out.push_back(std::move(t));
    }
    return out;
  }

 private:
  static bool lines_ok(const State& s) {
    for (const auto& line : kLines) {
      const int a = s[line[0]], b = s[line[1]], c = s[line[2]];
      if (a && b && c && a + b + c != 15) return false;
    }
    return true;
  }
};

}  // namespace

std::unique_ptr<PuzzleSpace> magic_square_space() { return std::make_unique<MagicSquare>(); }

// ---- Slothouber-Graatsma --------------------------------------------------

namespace {

constexpr int kBlocks = 6;
constexpr int kUnits = 3;
constexpr int kBlockCount = kCellCount;      // index of the placed-block counter
constexpr int kUnitCount = kCellCount + 1;   // index of the placed-unit counter

const Catalog& sg_catalog() {
  static const Catalog catalog({Piece{1, "block", {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}},
                                Piece{2, "unit", {{0, 0, 0}}}});
  return catalog;
}

class SlothouberGraatsma final : public PuzzleSpace {
 public:
  std::string name() const override { return "slothouber_graatsma"; }
  std::vector<State> initial_states() const override { return {State(kCellCount + 2, 0)}; }
  int horizon() const override { return kBlocks + kUnits; }
  std::optional<int> depth_measure() const override { return kBlocks + kUnits; }

  bool is_goal(const State& s) const override {
    return std::none_of(s.begin(), s.begin() + kCellCount, [](std::int16_t v) { return v == 0; });
  }

  std::vector<State> successors(const State& s) const override {
    CellMask occupied = 0;
    for (int i = 0; i < kCellCount; ++i)
      if (s[i]) occupied |= cell_bit(i);
    std::vector<State> out;
    if (occupied == kFullMask) return out;
    const int cell = std::countr_one(occupied);
    const Catalog& catalog = sg_catalog();
    for (const int index : catalog.covering(cell)) {
      const Placement& p = catalog.placement(index);
      if (p.occupied & occupied) continue;
      const bool block = p.piece_id == 1;
      if (block ? s[kBlockCount] >= kBlocks : s[kUnitCount] >= kUnits) continue;
      State t = s;
      const auto label = static_cast<std::int16_t>(block ? s[kBlockCount] + 1 : kBlocks + s[kUnitCount] + 1);
      for (CellMask m = p.occupied; m; m &= m - 1) t[std::countr_zero(m)] = label;
      ++t[block ? kBlockCount : kUnitCount];
      out.push_back(std::move(t));
    }
    return out;
  }
};

}  // namespace

std::unique_ptr<PuzzleSpace> slothouber_graatsma_space() { return std::make_unique<SlothouberGraatsma>(); }

Packing canonical_packing(Packing packing) {
  std::sort(packing.begin(), packing.end());
  Packing best = packing;
  for (int s = 1; s < kSymmetryCount; ++s) {
    Packing t;
    t.reserve(packing.size());
    for (const auto& [kind, mask] : packing) t.emplace_back(kind, transform_mask(mask, s));
    std::sort(t.begin(), t.end());
    if (t < best) best = std::move(t);
  }
  return best;
}

Packing sg_packing(const State& state) {
  std::vector<CellMask> by_label(kBlocks + kUnits + 1, 0);
  for (int i = 0; i < kCellCount; ++i) {
    if (state[i] <= 0 || state[i] > kBlocks + kUnits) throw std::invalid_argument("state is not a complete packing");
    by_label[state[i]] |= cell_bit(i);
  }
  Packing out;
  for (int label = 1; label <= kBlocks + kUnits; ++label) out.emplace_back(label <= kBlocks ? 1 : 2, by_label[label]);
  std::sort(out.begin(), out.end());
  return out;
}

// ---- Soma -----------------------------------------------------------------

namespace {

class SomaSpace final : public PuzzleSpace {
 public:
  SomaSpace(std::optional<StrategyConfig> strategy, const Catalog& catalog)
      : strategy_(std::move(strategy)), catalog_(catalog) {
    if (strategy_ && strategy_->ordering == Ordering::Randomized)
      throw std::invalid_argument("the randomized ordering depends on the path, not the state");
  }

  std::string name() const override { return strategy_ ? "soma_" + strategy_->fingerprint() : "soma"; }
  std::vector<State> initial_states() const override { return {State(kCellCount, 0)}; }
  int horizon() const override { return catalog_.piece_count(); }
  std::optional<int> depth_measure() const override { return catalog_.piece_count(); }

  bool is_goal(const State& s) const override {
    return std::none_of(s.begin(), s.end(), [](std::int16_t v) { return v == 0; });
  }

  std::vector<State> successors(const State& s) const override {
    CellMask occupied = 0;
    std::uint32_t used = 0;
    int depth = 0;
    for (int i = 0; i < kCellCount; ++i)
      if (s[i]) {
        occupied |= cell_bit(i);
        used |= 1u << (s[i] - 1);
      }
    depth = std::popcount(used);
    std::vector<State> out;
    auto consider = [&](const Placement& p) {
      if ((used >> (p.piece_id - 1)) & 1u || (p.occupied & occupied)) return;
      State t = s;
      for (CellMask m = p.occupied; m; m &= m - 1) t[std::countr_zero(m)] = static_cast<std::int16_t>(p.piece_id);
      if (strategy_) {
        if (strategy_->pruning && void_prune(occupied | p.occupied)) return;
        if (strategy_->landmark_table) {
          Labeling labels{};
          for (int i = 0; i < kCellCount; ++i) labels[i] = static_cast<std::uint8_t>(t[i]);
          if (strategy_->landmark_table->is_anti_landmark(labels, depth + 1)) return;
        }
      }
      out.push_back(std::move(t));
    };
    if (!strategy_) {
      for (const Placement& p : catalog_.placements()) consider(p);
    } else {
      const int cell = select_cell(occupied, used, *strategy_, 0, catalog_);
      if (cell < 0) return out;
      for (const int index : catalog_.covering(cell)) consider(catalog_.placement(index));
    }
    return out;
  }

 private:
  std::optional<StrategyConfig> strategy_;
  const Catalog& catalog_;
};

}  // namespace

std::unique_ptr<PuzzleSpace> soma_space(std::optional<StrategyConfig> strategy, const Catalog& catalog) {
  return std::make_unique<SomaSpace>(std::move(strategy), catalog);
}

// ---- profiling ------------------------------------------------------------

ExhaustiveTree exhaustive_tree(const PuzzleSpace& space, int max_depth, std::uint64_t node_budget) {
  if (max_depth < 0) throw std::invalid_argument("max_depth must be nonnegative");
  ExhaustiveTree tree;
  tree.histograms.resize(max_depth + 1);
  tree.goals.assign(max_depth + 1, 0);
  std::uint64_t nodes = 0;
  auto visit = [&](auto&& self, const State& s, int depth) -> void {
    if (++nodes > node_budget) {
      DegreeHistogram partial;
      for (const auto& h : tree.histograms)
        for (const auto& [k, c] : h.counts) partial.add(k, c);
      throw HistogramBudgetError("node budget of " + std::to_string(node_budget) + " exceeded", partial);
    }
    const auto next = space.successors(s);
    if (next.empty() && space.is_goal(s))
      ++tree.goals[depth];
    else
      tree.histograms[depth].add(static_cast<int>(next.size()));
    if (depth == max_depth) return;
    for (const State& t : next) self(self, t, depth + 1);
  };
  for (const State& s : space.initial_states()) visit(visit, s, 0);
  return tree;
}

std::vector<int> sample_space(const PuzzleSpace& space, int depth, int num_samples, std::uint64_t seed,
                              std::uint64_t max_restarts) {
  if (depth < 0) throw std::invalid_argument("depth must be nonnegative");
  if (num_samples < 1) throw std::invalid_argument("num_samples must be positive");
  const auto starts = space.initial_states();
  if (starts.empty()) throw std::invalid_argument("space has no initial state");
  std::vector<int> out;
  out.reserve(num_samples);
  for (int i = 0; i < num_samples; ++i) {
    std::mt19937_64 rng(walk_stream_seed(seed, static_cast<std::uint64_t>(i)));
    bool recorded = false;
    for (std::uint64_t attempt = 0; attempt <= max_restarts && !recorded; ++attempt) {
      State s = starts.size() == 1 ? starts[0]
                                   : starts[std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng)];
      bool dead = false;
      for (int d = 0; d < depth; ++d) {
        auto next = space.successors(s);
        if (next.empty()) {
          dead = true;
          break;
        }
        std::uniform_int_distribution<std::size_t> pick(0, next.size() - 1);
        s = std::move(next[pick(rng)]);
      }
      if (dead) continue;
      const auto degree = static_cast<int>(space.successors(s).size());
      if (degree == 0 && space.is_goal(s)) continue;
      out.push_back(degree);
      recorded = true;
    }
    if (!recorded)
      throw SamplingExhaustedError("no non-leaf depth-" + std::to_string(depth) + " state reached after " +
                                   std::to_string(max_restarts) + " restarts");
  }
  return out;
}

nlohmann::json ZooProfile::to_json() const {
  nlohmann::json j;
  j["puzzle"] = puzzle;
  j["estimator"] = estimator;
  j["per_move_mean"] = per_move_mean;
  j["branching_convention"] = "mean out-degree per depth, solution leaves excluded";
  if (depth_measure) j["depth_measure"] = *depth_measure;
  return j;
}

ZooProfile zoo_profile(const PuzzleSpace& space, const ProfileSettings& settings) {
  ZooProfile profile;
  profile.puzzle = space.name();
  profile.depth_measure = space.depth_measure();
  const int moves = settings.max_depth < 0 ? space.horizon() : settings.max_depth;
  if (moves < 1) throw std::invalid_argument("profile needs at least one move");
  if (settings.exhaustive) {
    profile.estimator = "exhaustive";
    profile.histograms = exhaustive_tree(space, moves - 1, settings.node_budget).histograms;
  } else {
    profile.estimator = "random-walk-with-restart";
    for (int d = 0; d < moves; ++d) {
      DegreeHistogram h;
      for (const int k : sample_space(space, d, settings.samples, settings.seed + static_cast<std::uint64_t>(d)))
        h.add(k);
      profile.histograms.push_back(std::move(h));
    }
  }
  for (const DegreeHistogram& h : profile.histograms) {
    if (h.total() == 0) break;
    profile.per_move_mean.push_back(h.mean());
  }
  return profile;
}

std::string zoo_csv_header() { return "puzzle,depth,out_degree,count\n"; }

std::string zoo_csv_rows(const ZooProfile& profile) { return histogram_csv_rows(profile.histograms, profile.puzzle); }

}  // namespace soma::zoo
