#include "soma/state.hpp"

#include <bit>

#include "soma/errors.hpp"

namespace soma {

Labeling PuzzleState::labels() const {
  Labeling out{};
  for (const Placement& p : placements_)
    for (CellMask m = p.occupied; m; m &= m - 1) out[std::countr_zero(m)] = static_cast<std::uint8_t>(p.piece_id);
  return out;
}

PuzzleState apply(const PuzzleState& state, const Placement& placement) {
  if (placement.piece_id <= 0 || placement.piece_id > 32)
    throw PieceReuseError("piece id " + std::to_string(placement.piece_id) + " out of range");
  if (state.uses(placement.piece_id))
    throw PieceReuseError("piece " + std::to_string(placement.piece_id) + " already placed");
  if (state.occupancy_ & placement.occupied)
    throw OverlapError("placement of piece " + std::to_string(placement.piece_id) + " overlaps occupied cells");
  PuzzleState next = state;
  next.occupancy_ |= placement.occupied;
  next.used_ |= 1u << (placement.piece_id - 1);
  next.placements_.push_back(placement);
  return next;
}

PuzzleState remove_last(const PuzzleState& state) {
  if (state.placements_.empty()) throw EmptyStateError("cannot remove a piece from the empty state");
  PuzzleState prev = state;
  const Placement& last = prev.placements_.back();
  prev.occupancy_ &= ~last.occupied;
  prev.used_ &= ~(1u << (last.piece_id - 1));
  prev.placements_.pop_back();
  return prev;
}

PuzzleState state_from_labels(const Labeling& labels, const Catalog& catalog) {
  std::vector<CellMask> regions(catalog.max_piece_id() + 1, 0);
  for (int i = 0; i < kCellCount; ++i) {
    if (labels[i] == 0) continue;
    if (labels[i] > catalog.max_piece_id()) throw FormatError("label " + std::to_string(labels[i]) + " is not a piece");
    regions[labels[i]] |= cell_bit(i);
  }
  PuzzleState state;
  for (int id = 1; id < static_cast<int>(regions.size()); ++id) {
    if (!regions[id]) continue;
    const int index = catalog.find(id, regions[id]);
    if (index < 0) throw FormatError("cells labelled " + std::to_string(id) + " do not form that piece");
    state = apply(state, catalog.placement(index));
  }
  return state;
}

bool is_valid_solution(const PuzzleState& state, const Catalog& catalog) {
  CellMask seen = 0;
  std::uint32_t pieces = 0;
  for (const Placement& p : state.placements()) {
    if (seen & p.occupied) return false;
    if ((pieces >> p.piece_id) & 1u) return false;
    if (catalog.find(p.piece_id, p.occupied) < 0) return false;
    seen |= p.occupied;
    pieces |= 1u << p.piece_id;
  }
  return seen == kFullMask && std::popcount(pieces) == catalog.piece_count();
}

}  // namespace soma
