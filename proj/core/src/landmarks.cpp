#include "soma/landmarks.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "soma/errors.hpp"

namespace soma {

namespace {

constexpr char kMagic[8] = {'S', 'O', 'M', 'A', 'L', 'M', 'K', '1'};
constexpr std::uint32_t kFormatVersion = 1;

bool fits(const Placement& p, CellMask occupancy, std::uint32_t used) {
  return !((used >> (p.piece_id - 1)) & 1u) && !(occupancy & p.occupied);
}

void set_labels(Labeling& labels, const Placement& p, std::uint8_t value) {
  for (CellMask m = p.occupied; m; m &= m - 1) labels[std::countr_zero(m)] = value;
}

// Walks the strategy tree down to the table depth in strategy order and
// counts solutions below every state reached there.
class Builder {
 public:
  Builder(int depth, const StrategyConfig& strategy, const BuildOptions& options, const Catalog& catalog)
      : depth_(depth), strategy_(strategy), options_(options), catalog_(catalog) {}

  void run() {
    nodes_ = 1;  // root
    if (options_.stop_after_positive && *options_.stop_after_positive == 0) return;
    descend(0, 0, root_path_hash(strategy_.seed), 0);
  }

  std::map<CanonicalForm, LandmarkEntry> entries;
  std::array<std::vector<CanonicalForm>, kMaxDepth + 1> dead;
  std::uint64_t nodes() const { return nodes_; }

 private:
  template <typename Visit>
  void for_each_child(CellMask occupancy, std::uint32_t used, std::uint64_t hash, int depth, Visit&& visit) {
    const int cell = select_cell(occupancy, used, strategy_, hash, catalog_);
    for (const int index : catalog_.covering(cell)) {
      const Placement& p = catalog_.placement(index);
      if (!fits(p, occupancy, used)) continue;
      const CellMask child = occupancy | p.occupied;
      if (strategy_.pruning && void_prune(child)) continue;
      ++nodes_;
      set_labels(labels_, p, static_cast<std::uint8_t>(p.piece_id));
      const bool keep_going =
          visit(child, used | (1u << (p.piece_id - 1)), extend_path_hash(hash, index), depth + 1);
      set_labels(labels_, p, 0);
      if (!keep_going) return;
    }
  }

  void record_dead(int depth) {
    if (options_.scope == AntiLandmarkScope::AllDepths && depth != depth_)
      dead[depth].push_back(canonicalize(labels_, catalog_.mirror_labels()));
  }

  // Returns the extension count of the subtree, or nullopt if preprocessing
  // stopped before the subtree was finished.
  std::optional<std::uint64_t> descend(CellMask occupancy, std::uint32_t used, std::uint64_t hash, int depth) {
    if (depth == depth_) return evaluate(occupancy, used, hash);
    std::uint64_t total = 0;
    bool complete = true;
    for_each_child(occupancy, used, hash, depth, [&](CellMask c, std::uint32_t u, std::uint64_t h, int d) {
      const auto sub = descend(c, u, h, d);
      if (!sub) {
        complete = false;
        return false;
      }
      total += *sub;
      return true;
    });
    if (!complete) return std::nullopt;
    if (total == 0 && depth > 0) record_dead(depth);
    return total;
  }

  std::optional<std::uint64_t> evaluate(CellMask occupancy, std::uint32_t used, std::uint64_t hash) {
    const std::uint64_t ext = count(occupancy, used, hash, depth_);
    LandmarkEntry& e = entries[canonicalize(labels_, catalog_.mirror_labels())];
    if (e.multiplicity == 0) e.representative = labels_;
    e.extension_count = ext;
    ++e.multiplicity;
    if (ext > 0) ++positive_;
    if (options_.stop_after_positive && positive_ >= *options_.stop_after_positive) return std::nullopt;
    return ext;
  }

  std::uint64_t count(CellMask occupancy, std::uint32_t used, std::uint64_t hash, int depth) {
    if (occupancy == kFullMask) return 1;
    std::uint64_t total = 0;
    for_each_child(occupancy, used, hash, depth, [&](CellMask c, std::uint32_t u, std::uint64_t h, int d) {
      const std::uint64_t sub = count(c, u, h, d);
      if (sub == 0) record_dead(d);
      total += sub;
      return true;
    });
    return total;
  }

  int depth_;
  const StrategyConfig& strategy_;
  const BuildOptions& options_;
  const Catalog& catalog_;
  Labeling labels_{};
  std::uint64_t nodes_ = 0;
  std::uint64_t positive_ = 0;
};

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ParseError("landmark table truncated");
  return v;
}

void write_key(std::ostream& out, const CanonicalForm& key) {
  out.write(reinterpret_cast<const char*>(key.labels.data()), kCellCount);
}

CanonicalForm read_key(std::istream& in) {
  CanonicalForm key;
  in.read(reinterpret_cast<char*>(key.labels.data()), kCellCount);
  if (!in) throw ParseError("landmark table truncated");
  return key;
}

}  // namespace

std::vector<LandmarkEntry> LandmarkTable::landmarks() const {
  std::vector<LandmarkEntry> ranked;
  for (const LandmarkEntry& e : entries_)
    if (e.extension_count > 0) ranked.push_back(e);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const LandmarkEntry& a, const LandmarkEntry& b) { return a.extension_count > b.extension_count; });
  if (ranked.size() > landmark_limit_) ranked.resize(landmark_limit_);
  return ranked;
}

std::size_t LandmarkTable::anti_landmark_count() const {
  std::size_t n = 0;
  for (const LandmarkEntry& e : entries_) n += e.extension_count == 0;
  for (const auto& v : extra_dead_) n += v.size();
  return n;
}

const LandmarkEntry* LandmarkTable::find(const CanonicalForm& key) const {
  const auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                                   [](const LandmarkEntry& e, const CanonicalForm& k) { return e.key < k; });
  return it != entries_.end() && it->key == key ? &*it : nullptr;
}

bool LandmarkTable::is_anti_landmark(const Labeling& labels, int depth) const {
  if (depth < 0 || depth > kMaxDepth) return false;
  const bool at_table_depth = depth == depth_ && !entries_.empty();
  if (!at_table_depth && extra_dead_[depth].empty()) return false;
  const CanonicalForm key = canonicalize(labels, mirror_labels_);
  if (at_table_depth) {
    const LandmarkEntry* e = find(key);
    return e && e->extension_count == 0;
  }
  return std::binary_search(extra_dead_[depth].begin(), extra_dead_[depth].end(), key);
}

LandmarkTable LandmarkTable::with_landmark_limit(std::uint64_t limit) const {
  LandmarkTable t = *this;
  t.landmark_limit_ = limit;
  return t;
}

void LandmarkTable::save(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, kFormatVersion);
  write_pod(out, static_cast<std::int32_t>(depth_));
  write_pod(out, static_cast<std::int32_t>(scope_));
  write_pod(out, landmark_limit_);
  write_pod(out, preprocessing_nodes_);
  write_pod(out, static_cast<std::int64_t>(preprocessing_time_.count()));
  write_pod(out, static_cast<std::uint32_t>(fingerprint_.size()));
  out.write(fingerprint_.data(), static_cast<std::streamsize>(fingerprint_.size()));
  write_pod(out, static_cast<std::uint32_t>(mirror_labels_.size()));
  out.write(reinterpret_cast<const char*>(mirror_labels_.data()), static_cast<std::streamsize>(mirror_labels_.size()));
  write_pod(out, static_cast<std::uint64_t>(entries_.size()));
  for (const LandmarkEntry& e : entries_) {
    write_key(out, e.key);
    write_pod(out, e.extension_count);
    write_pod(out, e.multiplicity);
    out.write(reinterpret_cast<const char*>(e.representative.data()), kCellCount);
  }
  for (const auto& dead : extra_dead_) {
    write_pod(out, static_cast<std::uint64_t>(dead.size()));
    for (const CanonicalForm& key : dead) write_key(out, key);
  }
}

LandmarkTable LandmarkTable::load(std::istream& in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic)))
    throw ParseError("not a landmark table file");
  if (read_pod<std::uint32_t>(in) != kFormatVersion) throw ParseError("unsupported landmark table version");
  LandmarkTable t;
  t.depth_ = read_pod<std::int32_t>(in);
  t.scope_ = static_cast<AntiLandmarkScope>(read_pod<std::int32_t>(in));
  t.landmark_limit_ = read_pod<std::uint64_t>(in);
  t.preprocessing_nodes_ = read_pod<std::uint64_t>(in);
  t.preprocessing_time_ = std::chrono::nanoseconds(read_pod<std::int64_t>(in));
  t.fingerprint_.resize(read_pod<std::uint32_t>(in));
  in.read(t.fingerprint_.data(), static_cast<std::streamsize>(t.fingerprint_.size()));
  t.mirror_labels_.resize(read_pod<std::uint32_t>(in));
  in.read(reinterpret_cast<char*>(t.mirror_labels_.data()), static_cast<std::streamsize>(t.mirror_labels_.size()));
  const auto n = read_pod<std::uint64_t>(in);
  t.entries_.resize(n);
  for (LandmarkEntry& e : t.entries_) {
    e.key = read_key(in);
    e.extension_count = read_pod<std::uint64_t>(in);
    e.multiplicity = read_pod<std::uint64_t>(in);
    e.representative = read_key(in).labels;
  }
  for (auto& dead : t.extra_dead_) {
    dead.resize(read_pod<std::uint64_t>(in));
    for (CanonicalForm& key : dead) key = read_key(in);
  }
  if (t.depth_ < 1 || t.depth_ >= kMaxDepth) throw ParseError("landmark table depth out of range");
  return t;
}

void LandmarkTable::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  save(out);
}

LandmarkTable LandmarkTable::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open landmark table " + path);
  return load(in);
}

nlohmann::json LandmarkTable::to_json() const {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["depth"] = depth_;
  j["strategy"] = fingerprint_;
  j["anti_landmark_scope"] = scope_ == AntiLandmarkScope::AllDepths ? "all_depths" : "table_depth";
  j["landmark_count_limit"] = landmark_limit_;
  j["preprocessing_nodes"] = preprocessing_nodes_;
  j["preprocessing_ms"] = std::chrono::duration<double, std::milli>(preprocessing_time_).count();
  j["anti_landmarks"] = anti_landmark_count();
  nlohmann::json entries = nlohmann::json::array();
  for (const LandmarkEntry& e : entries_)
    entries.push_back({{"key", e.key.to_string()}, {"extension_count", e.extension_count}, {"multiplicity", e.multiplicity}});
  j["entries"] = std::move(entries);
  return j;
}

LandmarkTable build_table(int depth, const StrategyConfig& base_strategy, const BuildOptions& options,
                          const Catalog& catalog) {
  if (depth < 1 || depth >= kMaxDepth) throw ResourceLimitError("landmark depth must be in 1..6");
  const auto t0 = std::chrono::steady_clock::now();
  StrategyConfig strategy = base_strategy;
  strategy.landmark_table.reset();
  Builder builder(depth, strategy, options, catalog);
  builder.run();

  LandmarkTable t;
  t.depth_ = depth;
  t.fingerprint_ = strategy.fingerprint();
  t.scope_ = options.scope;
  t.landmark_limit_ = options.landmark_count_limit;
  t.mirror_labels_.assign(catalog.mirror_labels().begin(), catalog.mirror_labels().end());
  for (auto& [key, entry] : builder.entries) {
    entry.key = key;
    t.entries_.push_back(entry);
  }
  for (int d = 0; d <= kMaxDepth; ++d) {
    auto& dead = builder.dead[d];
    std::sort(dead.begin(), dead.end());
    dead.erase(std::unique(dead.begin(), dead.end()), dead.end());
    t.extra_dead_[d] = std::move(dead);
  }
  t.preprocessing_nodes_ = builder.nodes();
  t.preprocessing_time_ = std::chrono::steady_clock::now() - t0;
  return t;
}

QueryResult query_solve(const LandmarkTable& table, const StrategyConfig& config, const Catalog& catalog) {
  if (table.entries().empty() && table.anti_landmark_count() == 0)
    throw NoLandmarksError("landmark table has no entries");
  const auto t0 = std::chrono::steady_clock::now();
  StrategyConfig query = config;
  query.stop_mode = StopMode::FirstSolution;
  query.landmark_table = std::shared_ptr<const LandmarkTable>(&table, [](const LandmarkTable*) {});

  QueryResult result;
  const auto landmarks = table.landmarks();
  for (const LandmarkEntry& lm : landmarks) {
    const PuzzleState start = state_from_labels(lm.representative, catalog);
    SearchResult r = solve_from(start, query, catalog, false);
    ++r.stats.nodes_created_per_depth[start.depth()];  // the jump itself
    ++r.stats.total_nodes;
    result.stats.merge(r.stats);
    if (!r.solutions.empty()) {
      result.solution = std::move(r.solutions.front());
      break;
    }
  }
  if (!result.solution) {
    SearchResult r = solve(query, catalog);
    result.stats.merge(r.stats);
    if (!r.solutions.empty()) result.solution = std::move(r.solutions.front());
  }
  result.stats.elapsed = std::chrono::steady_clock::now() - t0;
  result.record.depth = table.depth();
  result.record.num_landmarks = landmarks.size();
  result.record.preprocessing_nodes = table.preprocessing_nodes();
  result.record.preprocessing_time = table.preprocessing_time();
  result.record.query_nodes = result.stats.total_nodes;
  result.record.query_time = result.stats.elapsed;
  return result;
}

std::vector<TradeoffRecord> tradeoff_sweep(const std::vector<int>& depths,
                                           const std::vector<std::uint64_t>& landmark_counts,
                                           const StrategyConfig& base_strategy, AntiLandmarkScope scope,
                                           const Catalog& catalog) {
  std::vector<TradeoffRecord> out;
  StrategyConfig base = base_strategy;
  base.landmark_table.reset();
  base.stop_mode = StopMode::FirstSolution;
  for (const int depth : depths) {
    for (const std::uint64_t k : landmark_counts) {
      TradeoffRecord rec;
      if (k == 0) {
        const SearchResult r = solve(base, catalog);
        rec.depth = depth;
        rec.query_nodes = r.stats.total_nodes;
        rec.query_time = r.stats.elapsed;
      } else {
        BuildOptions options;
        options.scope = scope;
        options.stop_after_positive = k;
        options.landmark_count_limit = k;
        const LandmarkTable table = build_table(depth, base, options, catalog);
        rec = query_solve(table, base, catalog).record;
        rec.num_landmarks = k;
      }
      out.push_back(rec);
    }
  }
  return out;
}

std::string tradeoff_csv_header() {
  return "depth,num_landmarks,preprocessing_nodes,preprocessing_ms,query_nodes,query_ms\n";
}

std::string tradeoff_csv_row(const TradeoffRecord& r) {
  std::ostringstream out;
  out << r.depth << ',' << r.num_landmarks << ',' << r.preprocessing_nodes << ','
      << std::chrono::duration<double, std::milli>(r.preprocessing_time).count() << ',' << r.query_nodes << ','
      << std::chrono::duration<double, std::milli>(r.query_time).count() << '\n';
  return out.str();
}

std::array<double, kMaxDepth> strategy_tree_branching(const StrategyConfig& strategy, const LandmarkTable* table,
                                                      const Catalog& catalog) {
  StrategyConfig s = strategy;
  s.stop_mode = StopMode::Exhaustive;
  if (table) s.landmark_table = std::shared_ptr<const LandmarkTable>(table, [](const LandmarkTable*) {});
  else s.landmark_table.reset();
  const SearchResult r = solve(s, catalog);
  std::array<double, kMaxDepth> b{};
  for (int d = 0; d < kMaxDepth; ++d) {
    const auto parents = r.stats.nodes_created_per_depth[d];
    b[d] = parents ? static_cast<double>(r.stats.nodes_created_per_depth[d + 1]) / parents : 0.0;
  }
  return b;
}

std::array<double, kMaxDepth> effective_bf_upper_bound(const LandmarkTable& table, const StrategyConfig& strategy,
                                                       const Catalog& catalog) {
  StrategyConfig s = strategy;
  s.landmark_table.reset();
  if (s.fingerprint() != table.strategy_fingerprint())
    throw FormatError("table was built for '" + table.strategy_fingerprint() + "', not '" + s.fingerprint() + "'");
  return strategy_tree_branching(s, &table, catalog);
}

}  // namespace soma
