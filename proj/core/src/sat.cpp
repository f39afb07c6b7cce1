#include "soma/sat.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdlib>
#include <sstream>

#include "soma/canonical.hpp"

namespace soma::sat {

CnfFormula encode(const Catalog& catalog, EncodingSummary* summary) {
  CnfFormula f;
  f.num_vars = static_cast<int>(catalog.placements().size());
  EncodingSummary s;
  auto add_group = [&](const std::vector<int>& vars, std::size_t& pair_count) {
    f.clauses.push_back(vars);
    ++s.at_least_one;
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (std::size_t j = i + 1; j < vars.size(); ++j) {
        f.clauses.push_back({-vars[i], -vars[j]});
        ++pair_count;
      }
  };
  for (const Piece& piece : catalog.pieces()) {
    std::vector<int> vars;
    for (const Placement& p : catalog.placements_of(piece.id)) vars.push_back(p.index + 1);
    add_group(vars, s.piece_at_most_one);
  }
  for (int cell = 0; cell < kCellCount; ++cell) {
    std::vector<int> vars;
    for (const int index : catalog.covering(cell)) vars.push_back(index + 1);
    add_group(vars, s.cell_at_most_one);
  }
  if (summary) *summary = s;
  return f;
}

std::string variable_name(int var, const Catalog& catalog) {
  const Placement& p = catalog.placement(var - 1);
  const Cell a = p.anchor;
  std::ostringstream out;
  out << "P_{" << a.x + 1 << ',' << a.y + 1 << ',' << a.z + 1 << ',' << p.piece_id << "} o=" << p.orientation_index;
  return out.str();
}

std::string emit_dimacs(const CnfFormula& formula, const Catalog* catalog) {
  std::string out = "c soma-cnf 1\nc pairwise at-least-one / at-most-one encoding\n";
  if (catalog) {
    for (int v = 1; v <= formula.num_vars; ++v) out += "c var " + std::to_string(v) + ' ' + variable_name(v, *catalog) + '\n';
  }
  out += "p cnf " + std::to_string(formula.num_vars) + ' ' + std::to_string(formula.clauses.size()) + '\n';
  for (const Clause& c : formula.clauses) {
    for (const int lit : c) {
      out += std::to_string(lit);
      out += ' ';
    }
    out += "0\n";
  }
  return out;
}

CnfFormula parse_dimacs(std::string_view text) {
  CnfFormula f;
  bool header = false;
  std::size_t expected = 0;
  Clause current;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    line.remove_prefix(first);
    if (line.front() == 'c') continue;
    if (line.front() == 'p') {
      if (header) throw ParseError("line " + std::to_string(line_no) + ": second header");
      std::istringstream in{std::string(line)};
      std::string p, cnf;
      long long vars = -1, clauses = -1;
      if (!(in >> p >> cnf >> vars >> clauses) || cnf != "cnf" || vars < 0 || clauses < 0)
        throw ParseError("line " + std::to_string(line_no) + ": bad header");
      f.num_vars = static_cast<int>(vars);
      expected = static_cast<std::size_t>(clauses);
      header = true;
      continue;
    }
    if (!header) throw ParseError("line " + std::to_string(line_no) + ": clause before header");
    while (!line.empty()) {
      const auto start = line.find_first_not_of(" \t");
      if (start == std::string_view::npos) break;
      line.remove_prefix(start);
      int lit = 0;
      const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), lit);
      if (ec != std::errc() || (ptr != line.data() + line.size() && *ptr != ' ' && *ptr != '\t'))
        throw ParseError("line " + std::to_string(line_no) + ": bad literal");
      line.remove_prefix(ptr - line.data());
      if (lit == 0) {
        f.clauses.push_back(std::move(current));
        current.clear();
      } else {
        if (std::abs(lit) > f.num_vars) throw ParseError("line " + std::to_string(line_no) + ": variable out of range");
        current.push_back(lit);
      }
    }
  }
  if (!header) throw ParseError("missing header");
  if (!current.empty()) throw ParseError("last clause is not terminated");
  if (f.clauses.size() != expected) throw ParseError("header clause count does not match the body");
  return f;
}

bool satisfies(const CnfFormula& formula, const Model& model) {
  std::vector<bool> value(formula.num_vars + 1, false);
  for (const int v : model) {
    if (v < 1 || v > formula.num_vars) return false;
    value[v] = true;
  }
  return std::all_of(formula.clauses.begin(), formula.clauses.end(), [&](const Clause& c) {
    return std::any_of(c.begin(), c.end(), [&](int lit) { return value[std::abs(lit)] == (lit > 0); });
  });
}

namespace {

class Solver {
 public:
  explicit Solver(const CnfFormula& f) : n_(f.num_vars) {
    value_.assign(n_ + 1, 0);
    implied_.resize(2 * (n_ + 1));
    occurs_.resize(2 * (n_ + 1));
    for (const Clause& c : f.clauses) add_clause(c, false);
    original_long_ = longs_.size();
  }

  template <class OnModel>
  void run(OnModel&& on_model, SolverStats* stats) {
    stats_ = stats ? stats : &local_stats_;
    if (unsat_) return;
    for (const int lit : pending_units_) {
      if (val(lit) < 0) return;
      if (val(lit) == 0) assign(lit);
    }
    for (;;) {
      if (propagate()) {
        ++stats_->conflicts;
        if (!backtrack()) return;
        continue;
      }
      const int lit = pick();
      if (lit != 0) {
        ++stats_->decisions;
        levels_.push_back({trail_.size(), false});
        assign(lit);
        continue;
      }
      Model model;
      for (int v = 1; v <= n_; ++v)
        if (value_[v] > 0) model.push_back(v);
      if (!on_model(model)) return;
      Clause block;
      for (const int v : model) block.push_back(-v);
      if (block.empty()) return;  // the all-false model cannot be blocked this way
      const int id = add_clause(block, true);
      // The new clause is false under the current assignment; keep
      // backtracking until it is not, then propagate if it became unit.
      for (;;) {
        if (!backtrack()) return;
        const int state = clause_state(id);
        if (state >= 0) {
          if (state > 0) assign(state_literal(id));
          break;
        }
      }
    }
  }

 private:
  struct LongClause {
    Clause lits;
    int n_true = 0;
    int n_false = 0;
  };
  struct Level {
    std::size_t start;
    bool flipped;
  };

  static std::size_t code(int lit) { return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0); }
  int val(int lit) const { return lit > 0 ? value_[lit] : -value_[-lit]; }

  // Returns the long-clause id, or -1 for clauses stored elsewhere.
  int add_clause(Clause c, bool dynamic) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (const int lit : c)
      if (std::binary_search(c.begin(), c.end(), -lit)) return -1;  // tautology
    if (c.empty()) {
      unsat_ = true;
      return -1;
    }
    if (c.size() == 1 && !dynamic) {
      pending_units_.push_back(c[0]);
      return -1;
    }
    if (c.size() == 2 && !dynamic) {
      implied_[code(-c[0])].push_back(c[1]);
      implied_[code(-c[1])].push_back(c[0]);
      return -1;
    }
    const int id = static_cast<int>(longs_.size());
    LongClause lc{c, 0, 0};
    for (const int lit : c) {
      occurs_[code(lit)].push_back(id);
      if (val(lit) > 0) ++lc.n_true;
      if (val(lit) < 0) ++lc.n_false;
    }
    longs_.push_back(std::move(lc));
    return id;
  }

  void assign(int lit) {
    value_[std::abs(lit)] = lit > 0 ? 1 : -1;
    trail_.push_back(lit);
    for (const int id : occurs_[code(lit)]) ++longs_[id].n_true;
    for (const int id : occurs_[code(-lit)]) ++longs_[id].n_false;
  }

  void undo_to(std::size_t size) {
    while (trail_.size() > size) {
      const int lit = trail_.back();
      trail_.pop_back();
      for (const int id : occurs_[code(lit)]) --longs_[id].n_true;
      for (const int id : occurs_[code(-lit)]) --longs_[id].n_false;
      value_[std::abs(lit)] = 0;
    }
    head_ = std::min(head_, size);
  }

  // -1 conflict, 1 unit, 0 otherwise.
  int clause_state(int id) const {
    const LongClause& c = longs_[id];
    if (c.n_true > 0) return 0;
    const int open = static_cast<int>(c.lits.size()) - c.n_false;
    return open == 0 ? -1 : open == 1 ? 1 : 0;
  }

  int state_literal(int id) const {
    for (const int lit : longs_[id].lits)
      if (val(lit) == 0) return lit;
    return 0;
  }

  // True on conflict.
  bool propagate() {
    while (head_ < trail_.size()) {
      const int lit = trail_[head_++];
      ++stats_->propagations;
      for (const int implied : implied_[code(lit)]) {
        const int v = val(implied);
        if (v < 0) return true;
        if (v == 0) assign(implied);
      }
      for (const int id : occurs_[code(-lit)]) {
        const int state = clause_state(id);
        if (state < 0) return true;
        if (state > 0) assign(state_literal(id));
      }
    }
    return false;
  }

  // Flips the most recent decision that has not been flipped yet.
  bool backtrack() {
    while (!levels_.empty() && levels_.back().flipped) {
      undo_to(levels_.back().start);
      levels_.pop_back();
    }
    if (levels_.empty()) return false;
    const std::size_t start = levels_.back().start;
    const int decision = trail_[start];
    undo_to(start);
    levels_.back().flipped = true;
    assign(-decision);
    return true;
  }

  int pick() const {
    int best = -1;
    int best_open = 0;
    for (std::size_t id = 0; id < original_long_; ++id) {
      const LongClause& c = longs_[id];
      if (c.n_true > 0) continue;
      const int open = static_cast<int>(c.lits.size()) - c.n_false;
      if (best < 0 || open < best_open) {
        best = static_cast<int>(id);
        best_open = open;
      }
    }
    if (best >= 0) return state_literal(best);
    for (int v = 1; v <= n_; ++v)
      if (value_[v] == 0) return -v;
    return 0;
  }

  int n_;
  bool unsat_ = false;
  std::vector<std::int8_t> value_;
  std::vector<std::vector<int>> implied_;
  std::vector<std::vector<int>> occurs_;
  std::vector<LongClause> longs_;
  std::size_t original_long_ = 0;
  std::vector<int> pending_units_;
  std::vector<int> trail_;
  std::vector<Level> levels_;
  std::size_t head_ = 0;
  SolverStats local_stats_;
  SolverStats* stats_ = nullptr;
};

}  // namespace

std::optional<Model> dpll_solve(const CnfFormula& formula, SolverStats* stats) {
  std::optional<Model> found;
  Solver solver(formula);
  solver.run(
      [&](const Model& m) {
        if (!satisfies(formula, m)) throw InvalidModelError("solver produced an assignment that violates a clause");
        found = m;
        return false;
      },
      stats);
  return found;
}

std::vector<Model> enumerate_models(const CnfFormula& formula, std::uint64_t model_cap, SolverStats* stats) {
  std::vector<Model> models;
  Solver solver(formula);
  bool capped = false;
  solver.run(
      [&](const Model& m) {
        if (models.size() >= model_cap) {
          capped = true;
          return false;
        }
        models.push_back(m);
        return true;
      },
      stats);
  if (capped) throw ModelCapError("model cap of " + std::to_string(model_cap) + " reached", std::move(models));
  return models;
}

PuzzleState decode(const Model& model, const Catalog& catalog) {
  const int n = static_cast<int>(catalog.placements().size());
  std::vector<const Placement*> chosen(catalog.max_piece_id() + 1, nullptr);
  for (const int v : model) {
    if (v < 1 || v > n) throw InvalidModelError("variable " + std::to_string(v) + " out of range");
    const Placement& p = catalog.placement(v - 1);
    if (chosen[p.piece_id]) throw InvalidModelError("piece " + std::to_string(p.piece_id) + " placed twice");
    chosen[p.piece_id] = &p;
  }
  PuzzleState state;
  for (const Piece& piece : catalog.pieces()) {
    if (!chosen[piece.id]) throw InvalidModelError("piece " + std::to_string(piece.id) + " not placed");
    if (state.occupancy() & chosen[piece.id]->occupied) throw InvalidModelError("placements overlap");
    state = apply(state, *chosen[piece.id]);
  }
  if (!state.is_complete()) throw InvalidModelError("placements leave cells empty");
  return state;
}

Model model_of(const PuzzleState& state, const Catalog& catalog) {
  Model model;
  for (const Placement& p : state.placements()) {
    const int index = p.index >= 0 ? p.index : catalog.find(p.piece_id, p.occupied);
    if (index < 0) throw InvalidModelError("placement not in the catalog");
    model.push_back(index + 1);
  }
  std::sort(model.begin(), model.end());
  return model;
}

nlohmann::json models_to_json(const std::vector<Model>& models, const Catalog& catalog) {
  nlohmann::json out = nlohmann::json::array();
  for (const Model& m : models) {
    nlohmann::json placements = nlohmann::json::array();
    for (const int v : m) {
      const Placement& p = catalog.placement(v - 1);
      const Cell a = p.anchor;
      placements.push_back({{"var", v},
                            {"name", variable_name(v, catalog)},
                            {"piece", p.piece_id},
                            {"orientation", p.orientation_index},
                            {"anchor", {a.x, a.y, a.z}}});
    }
    out.push_back({{"true_vars", m},
                   {"placements", placements},
                   {"canonical", canonicalize(decode(m, catalog), catalog).to_string()}});
  }
  return out;
}

}  // namespace soma::sat
