#pragma once

#include <array>
#include <span>
#include <vector>

#include "soma/geometry.hpp"
#include "soma/pieces.hpp"

namespace soma {

/// One piece in one orientation, translated so its bounding-box minimum sits
/// at `anchor`.
struct Placement {
  int piece_id = 0;
  int orientation_index = 0;
  Cell anchor;
  CellMask occupied = 0;
  int index = -1;  // position in the owning Catalog, -1 when free-standing

  int size() const;
  friend bool operator==(const Placement& a, const Placement& b) {
    return a.piece_id == b.piece_id && a.orientation_index == b.orientation_index && a.anchor == b.anchor &&
           a.occupied == b.occupied;
  }
};

/// Every (orientation, anchor) whose cells stay inside the cube, ordered by
/// orientation index then anchor linear index.
std::vector<Placement> enumerate_placements(const Piece& piece);

/// Precomputed placement tables for a piece set. Placements are numbered
/// by (piece id, orientation index, anchor index); that order is also the
/// SAT variable order.
class Catalog {
 public:
  explicit Catalog(std::vector<Piece> pieces);

  /// The catalog for the standard Soma pieces.
  static const Catalog& standard();

  std::span<const Piece> pieces() const { return pieces_; }
  const Piece& piece(int id) const { return pieces_[id_to_slot_.at(id)]; }
  int piece_count() const { return static_cast<int>(pieces_.size()); }
  int max_piece_id() const { return static_cast<int>(id_to_slot_.size()) - 1; }

  std::span<const Orientation> orientations(int piece_id) const { return orientations_[id_to_slot_.at(piece_id)]; }

  std::span<const Placement> placements() const { return placements_; }
  const Placement& placement(int index) const { return placements_[index]; }
  std::span<const Placement> placements_of(int piece_id) const;

  /// Indices of placements covering a cell, in global order.
  std::span<const int> covering(int cell) const { return covering_[cell]; }

  /// Mirror partner of each piece id (index 0 maps to 0).
  std::span<const std::uint8_t> mirror_labels() const { return mirror_; }

  /// Finds the placement of `piece_id` occupying exactly `cells`, or -1.
  int find(int piece_id, CellMask cells) const;

 private:
  std::vector<Piece> pieces_;
  std::vector<int> id_to_slot_;
  std::vector<std::vector<Orientation>> orientations_;
  std::vector<Placement> placements_;
  std::vector<std::pair<int, int>> piece_ranges_;  // by slot: [begin, end)
  std::array<std::vector<int>, kCellCount> covering_;
  std::vector<std::uint8_t> mirror_;
};

}  // namespace soma
