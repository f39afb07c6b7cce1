#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "soma/geometry.hpp"

namespace soma {

inline constexpr int kPieceCount = 7;

struct Piece {
  int id = 0;
  std::string name;
  std::vector<Vec3> cells;  // normalized: sorted, minimum corner at the origin

  int size() const { return static_cast<int>(cells.size()); }
  friend bool operator==(const Piece&, const Piece&) = default;
};

struct Orientation {
  int piece_id = 0;
  int rotation_index = 0;   // first of the 24 rotations producing this shape
  std::vector<Vec3> cells;  // normalized
  CellMask shape_mask = 0;  // cells encoded at their normalized positions
};

/// Translates so the bounding-box minimum sits at the origin and sorts.
std::vector<Vec3> normalize(std::vector<Vec3> cells);

/// Mask of a normalized shape; every offset must lie inside a 3x3x3 box.
CellMask shape_mask(std::span<const Vec3> cells);

/// All distinct orientations under the 24 proper rotations, sorted by
/// shape mask.
std::vector<Orientation> generate_orientations(const Piece& piece);

/// The seven Soma pieces (V, L, T, Z, A, B, P), ids 1..7.
const std::vector<Piece>& standard_pieces();

/// For each piece id (index 0 unused), the id of the piece whose shape is its
/// mirror image. Achiral pieces map to themselves.
std::vector<std::uint8_t> mirror_partners(std::span<const Piece> pieces);

/// Text format, one piece per line: `<id> <name> x,y,z x,y,z ...`.
/// Lines starting with '#' are comments; the first comment carries the version.
std::vector<Piece> parse_pieces(std::istream& in);
std::vector<Piece> load_pieces(const std::string& path);
std::string format_pieces(std::span<const Piece> pieces);

}  // namespace soma
