#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "run_context.hpp"
#include "soma/canonical.hpp"
#include "soma/errors.hpp"
#include "soma/landmarks.hpp"
#include "soma/metrics.hpp"
#include "soma/sat.hpp"
#include "soma/search.hpp"
#include "soma/zoo.hpp"

namespace {

using nlohmann::json;
using somalab::RunContext;

struct Globals {
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir;
};

const std::vector<std::string> kOrderings{"random", "cell", "layer", "mcv"};

int exit_code_for(const std::string& code) {
  static const std::map<std::string, int> codes{
      {"usage", 2},          {"parse", 3},           {"format", 4},          {"overlap", 5},
      {"piece_reuse", 6},    {"empty_state", 7},     {"empty_stats", 8},     {"no_landmarks", 9},
      {"sampling_exhausted", 10}, {"resource_limit", 11}, {"division_by_zero", 12}, {"invalid_model", 13},
      {"io", 14},            {"invalid_argument", 15},
  };
  const auto it = codes.find(code);
  return it == codes.end() ? 1 : it->second;
}

int report_error(const std::string& code, const std::string& message) {
  const int exit_code = exit_code_for(code);
  std::cerr << json{{"error", code}, {"message", message}, {"exit_code", exit_code}}.dump() << "\n";
  return exit_code;
}

std::string format_real(double v) {
  std::ostringstream out;
  out << std::setprecision(12) << v;
  std::string s = out.str();
  if (s.find_first_of(".eE") == std::string::npos && std::isfinite(v)) s += ".0";
  return s;
}

soma::StrategyConfig make_strategy(const std::string& ordering, bool prune, std::uint64_t seed) {
  soma::StrategyConfig c;
  c.ordering = soma::parse_ordering(ordering);
  c.pruning = prune;
  c.seed = seed;
  return c;
}

json strategy_json(const soma::StrategyConfig& c) {
  return {{"ordering", soma::to_string(c.ordering)},
          {"pruning", c.pruning},
          {"seed", c.seed},
          {"stop_mode", soma::to_string(c.stop_mode)},
          {"landmarks", static_cast<bool>(c.landmark_table)}};
}

std::string labels_string(const soma::PuzzleState& s) { return soma::CanonicalForm{s.labels()}.to_string(); }

// ---- solve ------------------------------------------------------------------

struct SolveOptions {
  std::string ordering = "cell";
  bool prune = false;
  std::string landmarks;
  bool exhaustive = false;
};

void run_solve(const SolveOptions& o, const Globals& g) {
  RunContext ctx("solve", somalab::default_out_dir(g.out_dir));
  soma::StrategyConfig config = make_strategy(o.ordering, o.prune, g.seed);
  config.stop_mode = o.exhaustive ? soma::StopMode::Exhaustive : soma::StopMode::FirstSolution;
  if (!o.landmarks.empty()) {
    config.landmark_table = std::make_shared<const soma::LandmarkTable>(soma::LandmarkTable::load_file(o.landmarks));
    ctx.record_input(o.landmarks);
  }
  ctx.config() = strategy_json(config);
  ctx.config()["landmarks_file"] = o.landmarks;
  ctx.add_seed(g.seed);

  const soma::SearchResult r = soma::solve(config);
  json stats = soma::to_json(r.stats, config);
  if (o.exhaustive) {
    std::set<soma::CanonicalForm> canonical;
    for (const auto& s : r.solutions) canonical.insert(soma::canonicalize(s));
    const std::vector<soma::CanonicalForm> list(canonical.begin(), canonical.end());
    ctx.write("solutions.txt", soma::format_solutions(list));
    stats["canonical_solutions"] = list.size();
    std::cout << "solutions: " << r.solutions.size() << " raw, " << list.size() << " canonical\n";
  } else if (!r.solutions.empty()) {
    std::cout << labels_string(r.solutions.front()) << "\n";
  } else {
    std::cout << "no solution\n";
  }
  std::cout << "total_nodes: " << r.stats.total_nodes << "\n";
  ctx.write_json("solve.stats.json", stats);
  ctx.write("solve.stats.csv", soma::stats_csv_header() + soma::stats_csv_rows(r.stats, config));
  ctx.finish();
}

// ---- enumerate --------------------------------------------------------------

struct EnumerateOptions {
  std::string method = "both";
  std::uint64_t model_cap = UINT64_MAX;
};

void run_enumerate(const EnumerateOptions& o, const Globals& g) {
  RunContext ctx("enumerate", somalab::default_out_dir(g.out_dir));
  ctx.config() = {{"method", o.method}, {"model_cap", o.model_cap}};
  json summary;
  std::vector<soma::CanonicalForm> dfs, sat;
  if (o.method != "sat") {
    const auto e = soma::enumerate_all_solutions();
    dfs = e.canonical;
    ctx.write("solutions-dfs.txt", soma::format_solutions(dfs));
    summary["dfs"] = {{"raw", e.raw_count}, {"canonical", dfs.size()}};
    std::cout << "dfs: " << e.raw_count << " raw, " << dfs.size() << " canonical\n";
  }
  if (o.method != "dfs") {
    const auto formula = soma::sat::encode();
    const auto models = soma::sat::enumerate_models(formula, o.model_cap);
    std::set<soma::CanonicalForm> canonical;
    for (const auto& m : models) canonical.insert(soma::canonicalize(soma::sat::decode(m)));
    sat.assign(canonical.begin(), canonical.end());
    ctx.write("solutions-sat.txt", soma::format_solutions(sat));
    summary["sat"] = {{"raw", models.size()}, {"canonical", sat.size()}};
    std::cout << "sat: " << models.size() << " raw, " << sat.size() << " canonical\n";
  }
  if (o.method == "both") {
    summary["sets_equal"] = dfs == sat;
    std::cout << "canonical sets equal: " << (dfs == sat ? "yes" : "no") << "\n";
  }
  ctx.write_json("enumerate.json", summary);
  ctx.finish();
}

// ---- sample-bf --------------------------------------------------------------

struct SampleOptions {
  std::vector<int> depths{1, 2, 3, 4, 5, 6};
  int samples = 10000;
  int resamples = 10000;
  bool weighted = false;
  int exhaustive_depth = 0;
  std::uint64_t budget = 50'000'000;
  std::string tree;
  bool tree_prune = false;
};

void run_sample_bf(const SampleOptions& o, const Globals& g) {
  RunContext ctx("sample-bf", somalab::default_out_dir(g.out_dir));
  ctx.config() = {{"depths", o.depths},        {"samples", o.samples},   {"resamples", o.resamples},
                  {"weighted", o.weighted},    {"exhaustive_depth", o.exhaustive_depth},
                  {"budget", o.budget},        {"tree", o.tree},         {"tree_prune", o.tree_prune},
                  {"threads", g.threads}};
  ctx.add_seed(g.seed);
  soma::SamplingOptions sampling;
  sampling.threads = g.threads;

  std::map<int, std::vector<int>> samples;
  soma::DepthHistograms hist(*std::max_element(o.depths.begin(), o.depths.end()) + 1);
  json weighted = json::object();
  for (const int d : o.depths) {
    const std::uint64_t seed = g.seed + static_cast<std::uint64_t>(d);
    samples[d] = soma::sample_branching(d, o.samples, seed, sampling);
    for (const int k : samples[d]) hist[d].add(k);
    if (o.weighted)
      weighted[std::to_string(d)] = soma::weighted_mean(soma::sample_branching_weighted(d, o.samples, seed, sampling));
  }
  const soma::BranchingProfile profile = soma::make_profile(samples, g.seed, o.resamples);
  json out = profile.to_json();
  out["sample_seed_rule"] = "depth d uses seed + d";
  if (o.weighted) out["importance_weighted_mean"] = weighted;
  std::cout << std::fixed << std::setprecision(3);
  for (const auto& [d, m] : profile.per_depth_mean) std::cout << "depth " << d << ": mean " << m << "\n";
  std::cout << "overall mean " << profile.overall_mean << " (95% CI " << profile.ci95.low << ", " << profile.ci95.high
            << ")\n";

  if (o.exhaustive_depth > 0) {
    soma::DepthHistograms exact(o.exhaustive_depth + 1);
    json partial = nullptr;
    try {
      for (int d = 1; d <= o.exhaustive_depth; ++d) exact[d] = soma::exhaustive_branching(d, o.budget);
    } catch (const soma::HistogramBudgetError& e) {
      partial = {{"message", e.what()}, {"partial_states", e.partial().total()}};
    }
    ctx.write("sample-bf.exhaustive.csv", soma::histogram_csv_header() + soma::histogram_csv_rows(exact));
    json ex = json::array();
    for (int d = 1; d <= o.exhaustive_depth; ++d)
      if (exact[d].total())
        ex.push_back({{"depth", d}, {"states", exact[d].total()}, {"mean", exact[d].mean()}, {"variance", exact[d].variance()}});
    out["exhaustive"] = ex;
    if (!partial.is_null()) out["exhaustive_budget_exceeded"] = partial;
  }

  if (!o.tree.empty()) {
    const soma::StrategyConfig config = make_strategy(o.tree, o.tree_prune, g.seed);
    const soma::TreeShape shape = soma::tree_shape(config);
    std::vector<std::uint64_t> nodes(shape.stats.nodes_created_per_depth.begin(),
                                     shape.stats.nodes_created_per_depth.end());
    const auto avg = soma::average_branching(nodes, soma::kMaxDepth - 1);
    const auto fraction = soma::nonleaf_fraction_mean(soma::tree_counts(shape), soma::kMaxDepth - 1);
    out["tree"] = {{"strategy", strategy_json(config)},
                   {"nodes_per_depth", nodes},
                   {"ratio_per_depth", avg.per_depth},
                   {"depth_average", avg.depth_average},
                   {"node_weighted", avg.node_weighted},
                   {"nonleaf_fraction_mean", fraction.fraction_mean},
                   {"nonleaf_fraction_skipped_depths", fraction.skipped_depths}};
    std::cout << "tree " << config.fingerprint() << ": depth-average ratio " << avg.depth_average
              << ", node-weighted " << avg.node_weighted << ", non-leaf fraction mean " << fraction.fraction_mean << "\n";
  }
  ctx.write_json("sample-bf.profile.json", out);
  ctx.write("sample-bf.samples.csv", soma::histogram_csv_header() + soma::histogram_csv_rows(hist));
  ctx.finish();
}

// ---- effective-bf -----------------------------------------------------------

struct EffectiveOptions {
  double nodes = 0;
  bool matrix = false;
  std::string protocol = "exhaustive";
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int landmark_depth = 2;
};

void run_effective_bf(const EffectiveOptions& o, const Globals& g) {
  if (!o.matrix) {
    if (o.nodes < 1) throw std::invalid_argument("--nodes must be at least 1");
    std::cout << format_real(soma::effective_bf(o.nodes)) << "\n";
    return;
  }
  RunContext ctx("effective-bf", somalab::default_out_dir(g.out_dir));
  ctx.config() = {{"protocol", o.protocol}, {"seeds", o.seeds}, {"landmark_depth", o.landmark_depth}};
  for (const auto s : o.seeds) ctx.add_seed(s);
  const auto protocol =
      o.protocol == "first" ? soma::MatrixProtocol::FirstSolution : soma::MatrixProtocol::ExhaustiveTree;
  std::vector<soma::NamedStrategy> strategies;
  for (const std::string& ordering : kOrderings)
    for (const bool prune : {false, true}) {
      soma::StrategyConfig c = make_strategy(ordering, prune, g.seed);
      strategies.push_back({c.fingerprint(), c});
    }
  soma::StrategyConfig lm = make_strategy("cell", true, g.seed);
  lm.landmark_table = std::make_shared<const soma::LandmarkTable>(soma::build_table(o.landmark_depth, lm));
  strategies.push_back({"cell_ordered+prune+landmarks", lm});
  const soma::StrategyMatrix m = soma::strategy_matrix(strategies, o.seeds, protocol);
  ctx.write("effective-bf.matrix.csv", m.csv());
  ctx.write_json("effective-bf.matrix.json", {{"protocol", soma::to_string(m.protocol)}, {"cells", m.cells}});
  std::cout << m.display();
  ctx.finish();
}

// ---- encode-cnf -------------------------------------------------------------

struct EncodeOptions {
  std::string out = "soma.cnf";
  bool solve = false;
  bool enumerate = false;
  std::string models_json;
  std::uint64_t model_cap = UINT64_MAX;
};

void run_encode_cnf(const EncodeOptions& o, const Globals& g) {
  RunContext ctx("encode-cnf", somalab::default_out_dir(g.out_dir));
  ctx.config() = {{"out", o.out}, {"solve", o.solve}, {"enumerate", o.enumerate}, {"models_json", o.models_json}};
  soma::sat::EncodingSummary summary;
  const auto formula = soma::sat::encode(soma::Catalog::standard(), &summary);
  ctx.write(o.out, soma::sat::emit_dimacs(formula));
  std::cout << "p cnf " << formula.num_vars << " " << formula.clauses.size() << "\n"
            << "at-least-one clauses: " << summary.at_least_one << "\n"
            << "piece at-most-one clauses: " << summary.piece_at_most_one << "\n"
            << "cell at-most-one clauses: " << summary.cell_at_most_one << "\n";
  json info = {{"vars", formula.num_vars},
               {"clauses", formula.clauses.size()},
               {"at_least_one", summary.at_least_one},
               {"piece_at_most_one", summary.piece_at_most_one},
               {"cell_at_most_one", summary.cell_at_most_one}};
  if (o.solve) {
    const auto model = soma::sat::dpll_solve(formula);
    if (model) {
      std::cout << "SAT " << labels_string(soma::sat::decode(*model)) << "\n";
      info["model"] = *model;
    } else {
      std::cout << "UNSAT\n";
    }
  }
  if (o.enumerate || !o.models_json.empty()) {
    const auto models = soma::sat::enumerate_models(formula, o.model_cap);
    std::set<soma::CanonicalForm> canonical;
    for (const auto& m : models) canonical.insert(soma::canonicalize(soma::sat::decode(m)));
    std::cout << "models: " << models.size() << ", canonical: " << canonical.size() << "\n";
    info["models"] = models.size();
    info["canonical"] = canonical.size();
    if (!o.models_json.empty()) ctx.write_json(o.models_json, {{"models", soma::sat::models_to_json(models)}});
  }
  ctx.write_json("encode-cnf.json", info);
  ctx.finish();
}

// ---- landmarks --------------------------------------------------------------

soma::AntiLandmarkScope parse_scope(const std::string& s) {
  return s == "table" ? soma::AntiLandmarkScope::TableDepth : soma::AntiLandmarkScope::AllDepths;
}

struct LandmarkOptions {
  std::string ordering = "cell";
  bool prune = false;
  std::string scope = "all";
  int depth = 2;
  std::uint64_t limit = UINT64_MAX;
  std::uint64_t stop_after = 0;
  std::string out = "landmarks.bin";
  std::vector<int> depths{2, 3};
  std::vector<std::uint64_t> counts{0, 10, 100, 1000};
  std::string table;
};

void run_landmarks_build(const LandmarkOptions& o, const Globals& g) {
  RunContext ctx("landmarks build", somalab::default_out_dir(g.out_dir));
  const soma::StrategyConfig config = make_strategy(o.ordering, o.prune, g.seed);
  soma::BuildOptions options;
  options.scope = parse_scope(o.scope);
  options.landmark_count_limit = o.limit;
  if (o.stop_after > 0) options.stop_after_positive = o.stop_after;
  ctx.config() = {{"strategy", strategy_json(config)}, {"depth", o.depth}, {"scope", o.scope},
                  {"limit", o.limit},                  {"stop_after", o.stop_after}, {"out", o.out}};
  ctx.add_seed(g.seed);
  const soma::LandmarkTable table = soma::build_table(o.depth, config, options);
  const auto path = ctx.resolve(o.out);
  std::filesystem::create_directories(path.parent_path());
  table.save_file(path.string());
  ctx.record_output(path);
  json summary = table.to_json();
  summary.erase("entries");
  summary["landmarks"] = table.landmarks().size();
  summary["entries"] = table.entries().size();
  ctx.write_json(o.out + ".json", summary);
  std::cout << "entries " << table.entries().size() << ", landmarks " << table.landmarks().size()
            << ", anti-landmarks " << table.anti_landmark_count() << ", preprocessing nodes "
            << table.preprocessing_nodes() << "\n";
  ctx.finish();
}

void run_landmarks_sweep(const LandmarkOptions& o, const Globals& g) {
  RunContext ctx("landmarks sweep", somalab::default_out_dir(g.out_dir));
  const soma::StrategyConfig config = make_strategy(o.ordering, o.prune, g.seed);
  ctx.config() = {{"strategy", strategy_json(config)}, {"depths", o.depths}, {"counts", o.counts}, {"scope", o.scope}};
  ctx.add_seed(g.seed);
  const auto records = soma::tradeoff_sweep(o.depths, o.counts, config, parse_scope(o.scope));
  std::string csv = soma::tradeoff_csv_header();
  for (const auto& r : records) csv += soma::tradeoff_csv_row(r);
  ctx.write("landmarks-sweep.csv", csv);
  std::cout << csv;
  ctx.finish();
}

void run_landmarks_query(const LandmarkOptions& o, const Globals& g) {
  RunContext ctx("landmarks query", somalab::default_out_dir(g.out_dir));
  const soma::StrategyConfig config = make_strategy(o.ordering, o.prune, g.seed);
  ctx.config() = {{"strategy", strategy_json(config)}, {"table", o.table}};
  ctx.record_input(o.table);
  const soma::LandmarkTable table = soma::LandmarkTable::load_file(o.table);
  const soma::QueryResult r = soma::query_solve(table, config);
  if (r.solution)
    std::cout << labels_string(*r.solution) << "\n";
  else
    std::cout << "no solution\n";
  std::cout << "query_nodes: " << r.record.query_nodes << "\n";
  std::string csv = soma::tradeoff_csv_header() + soma::tradeoff_csv_row(r.record);
  ctx.write("landmarks-query.csv", csv);
  ctx.write_json("landmarks-query.stats.json", soma::to_json(r.stats, config));
  ctx.finish();
}

// ---- zoo --------------------------------------------------------------------

struct ZooOptions {
  std::string puzzle = "all";
  bool sampled = false;
  int samples = 2000;
  int max_depth = -1;
  bool diameter = false;
};

void run_zoo(const ZooOptions& o, const Globals& g) {
  RunContext ctx("zoo", somalab::default_out_dir(g.out_dir));
  ctx.config() = {{"puzzle", o.puzzle}, {"sampled", o.sampled}, {"samples", o.samples}, {"max_depth", o.max_depth},
                  {"diameter", o.diameter}};
  ctx.add_seed(g.seed);
  std::vector<std::pair<std::unique_ptr<soma::zoo::PuzzleSpace>, int>> spaces;
  auto want = [&](const std::string& name) { return o.puzzle == "all" || o.puzzle == name; };
  const int eight_depth = o.max_depth > 0 ? o.max_depth : 12;
  if (want("eight")) spaces.emplace_back(soma::zoo::eight_puzzle_space(false), eight_depth);
  if (want("eight-nb")) spaces.emplace_back(soma::zoo::eight_puzzle_space(true), eight_depth);
  if (want("magic")) spaces.emplace_back(soma::zoo::magic_square_space(), o.max_depth);
  if (want("sg")) spaces.emplace_back(soma::zoo::slothouber_graatsma_space(), o.max_depth);
  if (want("soma")) spaces.emplace_back(soma::zoo::soma_space(soma::StrategyConfig{}), o.max_depth);
  if (spaces.empty()) throw std::invalid_argument("unknown puzzle '" + o.puzzle + "'");

  std::string csv = soma::zoo::zoo_csv_header();
  json profiles = json::array();
  for (const auto& [space, depth] : spaces) {
    soma::zoo::ProfileSettings settings;
    settings.exhaustive = !o.sampled;
    settings.samples = o.samples;
    settings.seed = g.seed;
    settings.max_depth = depth;
    const auto profile = soma::zoo::zoo_profile(*space, settings);
    csv += soma::zoo::zoo_csv_rows(profile);
    profiles.push_back(profile.to_json());
    std::cout << profile.puzzle << ":";
    for (const double m : profile.per_move_mean) std::cout << ' ' << format_real(std::round(m * 1000) / 1000);
    std::cout << "\n";
  }
  json out = {{"profiles", profiles}};
  if (o.diameter) {
    const auto d = soma::zoo::eight_puzzle_diameter();
    out["eight_puzzle_diameter"] = {{"eccentricity", d.eccentricity}, {"reachable", d.reachable},
                                    {"farthest", d.farthest.size()}};
    std::cout << "8-puzzle diameter " << d.eccentricity << " over " << d.reachable << " states\n";
  }
  ctx.write("zoo.csv", csv);
  ctx.write_json("zoo.json", out);
  ctx.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"somalab: Soma cube search, branching-factor and SAT experiments"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--threads", g.threads, "Upper bound on worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Output directory (default: $SOMALAB_OUT_DIR or ./somalab-out)");

  std::function<void()> action;

  SolveOptions solve;
  auto* cmd = app.add_subcommand("solve", "Depth-first search for one or all solutions");
  cmd->add_option("--ordering", solve.ordering)->check(CLI::IsMember(kOrderings))->capture_default_str();
  cmd->add_flag("--prune", solve.prune, "Discard states with an empty region of one or two cells");
  cmd->add_option("--landmarks", solve.landmarks, "Landmark table file for anti-landmark pruning")
      ->check(CLI::ExistingFile);
  cmd->add_flag("--exhaustive", solve.exhaustive, "Enumerate every solution");
  cmd->callback([&] { action = [&] { run_solve(solve, g); }; });

  EnumerateOptions enumerate;
  cmd = app.add_subcommand("enumerate", "All solutions by DFS and by SAT model enumeration");
  cmd->add_option("--method", enumerate.method)->check(CLI::IsMember({"dfs", "sat", "both"}))->capture_default_str();
  cmd->add_option("--model-cap", enumerate.model_cap, "Stop SAT enumeration after this many models");
  cmd->callback([&] { action = [&] { run_enumerate(enumerate, g); }; });

  SampleOptions sample;
  cmd = app.add_subcommand("sample-bf", "Sampled and exact branching-factor statistics");
  cmd->add_option("--depths", sample.depths)->delimiter(',')->check(CLI::Range(1, 6))->capture_default_str();
  cmd->add_option("--samples", sample.samples)->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--resamples", sample.resamples, "Bootstrap resamples")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_flag("--weighted", sample.weighted, "Also report the importance-weighted estimator");
  cmd->add_option("--exhaustive-depth", sample.exhaustive_depth, "Exact histograms for depths 1..K")
      ->check(CLI::Range(0, 7));
  cmd->add_option("--budget", sample.budget, "State budget for exact histograms")->capture_default_str();
  cmd->add_option("--tree", sample.tree, "Ratio statistics of the complete tree of this ordering")
      ->check(CLI::IsMember({"cell", "layer", "mcv"}));
  cmd->add_flag("--tree-prune", sample.tree_prune, "Prune the --tree search");
  cmd->callback([&] { action = [&] { run_sample_bf(sample, g); }; });

  EffectiveOptions effective;
  cmd = app.add_subcommand("effective-bf", "Effective branching factor of a node count or of every strategy");
  auto* nodes_opt = cmd->add_option("--nodes", effective.nodes, "Total node count N");
  auto* matrix_flag = cmd->add_flag("--matrix", effective.matrix, "Run the strategy matrix");
  nodes_opt->excludes(matrix_flag);
  cmd->add_option("--protocol", effective.protocol)->check(CLI::IsMember({"exhaustive", "first"}))->capture_default_str();
  cmd->add_option("--seeds", effective.seeds, "Seeds for randomized strategies")->delimiter(',');
  cmd->add_option("--landmark-depth", effective.landmark_depth)->check(CLI::Range(1, 6))->capture_default_str();
  cmd->callback([&] {
    if (!effective.matrix && nodes_opt->count() == 0) throw CLI::RequiredError("--nodes or --matrix");
    action = [&] { run_effective_bf(effective, g); };
  });

  EncodeOptions encode;
  cmd = app.add_subcommand("encode-cnf", "Write the CNF encoding; optionally solve or enumerate it");
  cmd->add_option("--out", encode.out, "DIMACS file name inside the output directory")->capture_default_str();
  cmd->add_flag("--solve", encode.solve, "Find one model with the built-in DPLL solver");
  cmd->add_flag("--enumerate", encode.enumerate, "Enumerate all models with blocking clauses");
  cmd->add_option("--models-json", encode.models_json, "Write enumerated models to this file");
  cmd->add_option("--model-cap", encode.model_cap, "Stop enumeration after this many models");
  cmd->callback([&] { action = [&] { run_encode_cnf(encode, g); }; });

  LandmarkOptions lm;
  auto* landmarks = app.add_subcommand("landmarks", "Landmark tables");
  landmarks->require_subcommand(1);
  auto add_strategy = [&](CLI::App* c) {
    c->add_option("--ordering", lm.ordering)->check(CLI::IsMember(kOrderings))->capture_default_str();
    c->add_flag("--prune", lm.prune);
  };
  cmd = landmarks->add_subcommand("build", "Build and save a landmark table");
  add_strategy(cmd);
  cmd->add_option("--depth", lm.depth)->check(CLI::Range(1, 6))->capture_default_str();
  cmd->add_option("--scope", lm.scope)->check(CLI::IsMember({"all", "table"}))->capture_default_str();
  cmd->add_option("--limit", lm.limit, "Landmarks exposed to queries");
  cmd->add_option("--stop-after", lm.stop_after, "Stop after this many landmarks are found");
  cmd->add_option("--out", lm.out)->capture_default_str();
  cmd->callback([&] { action = [&] { run_landmarks_build(lm, g); }; });
  cmd = landmarks->add_subcommand("sweep", "Preprocessing/query trade-off");
  add_strategy(cmd);
  cmd->add_option("--depths", lm.depths)->delimiter(',')->check(CLI::Range(1, 6))->capture_default_str();
  cmd->add_option("--counts", lm.counts)->delimiter(',')->capture_default_str();
  cmd->add_option("--scope", lm.scope)->check(CLI::IsMember({"all", "table"}))->capture_default_str();
  cmd->callback([&] { action = [&] { run_landmarks_sweep(lm, g); }; });
  cmd = landmarks->add_subcommand("query", "Solve using a saved table");
  add_strategy(cmd);
  cmd->add_option("--table", lm.table)->required()->check(CLI::ExistingFile);
  cmd->callback([&] { action = [&] { run_landmarks_query(lm, g); }; });

  ZooOptions zoo;
  cmd = app.add_subcommand("zoo", "Branching profiles of the comparison puzzles");
  cmd->add_option("--puzzle", zoo.puzzle)
      ->check(CLI::IsMember({"all", "eight", "eight-nb", "magic", "sg", "soma"}))
      ->capture_default_str();
  cmd->add_flag("--sampled", zoo.sampled, "Use random walks instead of full expansion");
  cmd->add_option("--samples", zoo.samples)->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--max-depth", zoo.max_depth, "Moves to profile (default: the puzzle's horizon, 12 for the 8-puzzle)");
  cmd->add_flag("--diameter", zoo.diameter, "Compute the 8-puzzle diameter by breadth-first search");
  cmd->callback([&] { action = [&] { run_zoo(zoo, g); }; });

  app.fallthrough();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("usage", e.what());
  }

  try {
    if (action) action();
    return 0;
  } catch (const soma::Error& e) {
    return report_error(e.code(), e.what());
  } catch (const std::invalid_argument& e) {
    return report_error("invalid_argument", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report_error("io", e.what());
  } catch (const std::exception& e) {
    return report_error("internal", e.what());
  }
}
