#include "soma/placement.hpp"

#include <algorithm>
#include <bit>

#include "soma/errors.hpp"

namespace soma {

int Placement::size() const { return std::popcount(occupied); }

std::vector<Placement> enumerate_placements(const Piece& piece) {
  std::vector<Placement> out;
  const auto orientations = generate_orientations(piece);
  for (int o = 0; o < static_cast<int>(orientations.size()); ++o) {
    for (int a = 0; a < kCellCount; ++a) {
      const Vec3 anchor = cell_at(a);
      CellMask occupied = 0;
      bool fits = true;
      for (const Vec3& c : orientations[o].cells) {
        const Vec3 p = anchor + c;
        if (!in_bounds(p)) {
          fits = false;
          break;
        }
        occupied |= cell_bit(cell_index(p));
      }
      if (fits) out.push_back({piece.id, o, Cell::from_index(a), occupied, -1});
    }
  }
  return out;
}

Catalog::Catalog(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.id < b.id; });
  int max_id = 0;
  for (const Piece& p : pieces_) {
    if (p.id <= 0) throw FormatError("piece ids must be positive");
    max_id = std::max(max_id, p.id);
  }
  id_to_slot_.assign(max_id + 1, -1);
  for (int slot = 0; slot < static_cast<int>(pieces_.size()); ++slot) {
    if (id_to_slot_[pieces_[slot].id] != -1) throw FormatError("duplicate piece id");
    id_to_slot_[pieces_[slot].id] = slot;
  }

  for (const Piece& p : pieces_) {
    orientations_.push_back(generate_orientations(p));
    const int begin = static_cast<int>(placements_.size());
    for (Placement pl : enumerate_placements(p)) {
      pl.index = static_cast<int>(placements_.size());
      placements_.push_back(pl);
    }
    piece_ranges_.emplace_back(begin, static_cast<int>(placements_.size()));
  }
  for (const Placement& pl : placements_) {
    for (CellMask m = pl.occupied; m; m &= m - 1) covering_[std::countr_zero(m)].push_back(pl.index);
  }
  mirror_ = mirror_partners(pieces_);
}

const Catalog& Catalog::standard() {
  static const Catalog catalog(standard_pieces());
  return catalog;
}

std::span<const Placement> Catalog::placements_of(int piece_id) const {
  const auto [begin, end] = piece_ranges_[id_to_slot_.at(piece_id)];
  return std::span<const Placement>(placements_).subspan(begin, end - begin);
}

int Catalog::find(int piece_id, CellMask cells) const {
  for (const Placement& pl : placements_of(piece_id))
    if (pl.occupied == cells) return pl.index;
  return -1;
}

}  // namespace soma
