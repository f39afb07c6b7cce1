#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "soma/errors.hpp"
#include "soma/state.hpp"

namespace soma::sat {

using Clause = std::vector<int>;  // DIMACS literals: +v or -v

struct CnfFormula {
  int num_vars = 0;
  std::vector<Clause> clauses;

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;
};

struct EncodingSummary {
  std::size_t at_least_one = 0;
  std::size_t piece_at_most_one = 0;
  std::size_t cell_at_most_one = 0;
  std::size_t total() const { return at_least_one + piece_at_most_one + cell_at_most_one; }
};

/// Variable v is catalog placement v - 1. For each piece: an at-least-one
/// clause over its placements followed by every pairwise at-most-one clause;
/// then the same for each cell over the placements covering it.
CnfFormula encode(const Catalog& catalog = Catalog::standard(), EncodingSummary* summary = nullptr);

/// Name of a variable: P_{x,y,z,l} with the anchor 1-indexed, plus the orientation.
std::string variable_name(int var, const Catalog& catalog = Catalog::standard());

/// DIMACS text with a comment block naming every variable.
std::string emit_dimacs(const CnfFormula& formula, const Catalog* catalog = &Catalog::standard());
/// Throws ParseError on malformed input or header/body count mismatch.
CnfFormula parse_dimacs(std::string_view text);

/// Sorted ids of the variables set to true; every other variable is false.
using Model = std::vector<int>;

bool satisfies(const CnfFormula& formula, const Model& model);

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
};

/// DPLL: unit propagation, branching on the shortest open at-least-one
/// clause, chronological backtracking. The model is checked against every
/// clause before it is returned. std::nullopt means UNSAT.
std::optional<Model> dpll_solve(const CnfFormula& formula, SolverStats* stats = nullptr);

/// Raised when enumeration reaches its model cap; carries the models found.
class ModelCapError : public ResourceLimitError {
 public:
  ModelCapError(const std::string& what, std::vector<Model> partial)
      : ResourceLimitError(what), partial_(std::move(partial)) {}
  const std::vector<Model>& partial() const { return partial_; }

 private:
  std::vector<Model> partial_;
};

/// All models. After each model the clause of its negated true literals is
/// added and the search resumes from the current branch.
std::vector<Model> enumerate_models(const CnfFormula& formula, std::uint64_t model_cap = UINT64_MAX,
                                    SolverStats* stats = nullptr);

/// Applies the true variables' placements in piece-id order. Throws
/// InvalidModelError unless they form a complete, non-overlapping assembly
/// with one placement per piece.
PuzzleState decode(const Model& model, const Catalog& catalog = Catalog::standard());
Model model_of(const PuzzleState& state, const Catalog& catalog = Catalog::standard());

nlohmann::json models_to_json(const std::vector<Model>& models, const Catalog& catalog = Catalog::standard());

}  // namespace soma::sat
