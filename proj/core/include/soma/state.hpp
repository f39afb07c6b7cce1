#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "soma/geometry.hpp"
#include "soma/placement.hpp"

namespace soma {

/// Per-cell piece ids in linearization order; 0 marks an empty cell.
using Labeling = std::array<std::uint8_t, kCellCount>;

/// A partial assembly. Values are immutable in practice: `apply` and
/// `remove_last` return new states and leave their argument untouched.
class PuzzleState {
 public:
  PuzzleState() = default;

  CellMask occupancy() const { return occupancy_; }
  std::uint32_t used_pieces() const { return used_; }  // bit (id - 1)
  bool uses(int piece_id) const { return (used_ >> (piece_id - 1)) & 1u; }
  std::span<const Placement> placements() const { return placements_; }
  int depth() const { return static_cast<int>(placements_.size()); }
  bool is_complete() const { return occupancy_ == kFullMask; }
  Labeling labels() const;

  friend bool operator==(const PuzzleState&, const PuzzleState&) = default;

 private:
  friend PuzzleState apply(const PuzzleState&, const Placement&);
  friend PuzzleState remove_last(const PuzzleState&);

  CellMask occupancy_ = 0;
  std::uint32_t used_ = 0;
  std::vector<Placement> placements_;
};

/// Throws OverlapError or PieceReuseError when the move is illegal.
PuzzleState apply(const PuzzleState& state, const Placement& placement);

/// Throws EmptyStateError at depth 0.
PuzzleState remove_last(const PuzzleState& state);

/// Rebuilds a state from a labeling by looking each labelled region up in the
/// catalog; placements are applied in piece-id order. Throws FormatError if a
/// region is not a placement of its piece.
PuzzleState state_from_labels(const Labeling& labels, const Catalog& catalog = Catalog::standard());

/// Independent check: 7 distinct pieces, pairwise disjoint, all 27 cells.
bool is_valid_solution(const PuzzleState& state, const Catalog& catalog = Catalog::standard());

}  // namespace soma
