#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>

namespace soma {

inline constexpr int kSide = 3;
inline constexpr int kCellCount = kSide * kSide * kSide;

/// Bit i is set when cell with linear index i is occupied.
using CellMask = std::uint32_t;
inline constexpr CellMask kFullMask = (CellMask{1} << kCellCount) - 1;

struct Vec3 {
  int x = 0;
  int y = 0;
  int z = 0;

  friend constexpr auto operator<=>(const Vec3&, const Vec3&) = default;
  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
};

constexpr bool in_bounds(Vec3 v) {
  return v.x >= 0 && v.x < kSide && v.y >= 0 && v.y < kSide && v.z >= 0 && v.z < kSide;
}

// The repo-wide linearization: idx = 9x + 3y + z.
constexpr int cell_index(Vec3 v) { return 9 * v.x + 3 * v.y + v.z; }
constexpr Vec3 cell_at(int index) { return {index / 9, (index / 3) % 3, index % 3}; }
constexpr CellMask cell_bit(int index) { return CellMask{1} << index; }

/// A position inside the 3x3x3 cube.
struct Cell {
  int x = 0;
  int y = 0;
  int z = 0;

  friend constexpr auto operator<=>(const Cell&, const Cell&) = default;

  constexpr int index() const { return cell_index(vec()); }
  constexpr Vec3 vec() const { return {x, y, z}; }
  static constexpr Cell from_index(int index) {
    const Vec3 v = cell_at(index);
    return {v.x, v.y, v.z};
  }
  /// Throws std::out_of_range when the coordinates leave the cube.
  static Cell checked(int x, int y, int z);
};

std::string to_string(Cell c);

/// A signed permutation matrix acting on integer vectors.
struct Symmetry {
  std::array<std::array<int, 3>, 3> m{};

  friend constexpr auto operator<=>(const Symmetry&, const Symmetry&) = default;

  constexpr Vec3 apply(Vec3 v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  int determinant() const;
  bool proper() const { return determinant() == 1; }
  Symmetry compose(const Symmetry& inner) const;  // this * inner
};

inline constexpr int kRotationCount = 24;
inline constexpr int kSymmetryCount = 48;

/// The 48 symmetries of the cube. Index 0 is the identity, indices 0..23 are
/// the proper rotations, 24..47 the improper ones (rotation times reflection).
const std::array<Symmetry, kSymmetryCount>& cube_symmetries();

/// For each symmetry s, perm[s][i] is the linear index that cell i maps to
/// when the cube is transformed about its centre.
using CellPermutation = std::array<std::uint8_t, kCellCount>;
const std::array<CellPermutation, kSymmetryCount>& cell_permutations();

CellMask transform_mask(CellMask mask, int symmetry);

/// Face-adjacent neighbours of each cell.
const std::array<CellMask, kCellCount>& neighbor_masks();

}  // namespace soma
