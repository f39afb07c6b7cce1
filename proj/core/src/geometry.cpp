#include "soma/geometry.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace soma {

Cell Cell::checked(int x, int y, int z) {
  if (!in_bounds({x, y, z})) {
    throw std::out_of_range("cell (" + std::to_string(x) + "," + std::to_string(y) + "," +
                            std::to_string(z) + ") outside the cube");
  }
  return {x, y, z};
}

std::string to_string(Cell c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

int Symmetry::determinant() const {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Symmetry Symmetry::compose(const Symmetry& inner) const {
  Symmetry out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) out.m[i][j] += m[i][k] * inner.m[k][j];
  return out;
}

namespace {

std::array<Symmetry, kSymmetryCount> build_symmetries() {
  std::array<int, 3> perm{0, 1, 2};
  std::array<Symmetry, kSymmetryCount> all{};
  int n = 0;
  do {
    for (int signs = 0; signs < 8; ++signs) {
      Symmetry s;
      for (int row = 0; row < 3; ++row) s.m[row][perm[row]] = (signs >> row) & 1 ? -1 : 1;
      all[n++] = s;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  const Symmetry identity{{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}};
  // Proper rotations first, identity at the very front, the rest in matrix order.
  std::sort(all.begin(), all.end(), [&](const Symmetry& a, const Symmetry& b) {
    const auto key = [&](const Symmetry& s) { return std::pair{-s.determinant(), s != identity}; };
    if (key(a) != key(b)) return key(a) < key(b);
    return a < b;
  });
  return all;
}

std::array<CellPermutation, kSymmetryCount> build_permutations() {
  std::array<CellPermutation, kSymmetryCount> out{};
  const auto& syms = cube_symmetries();
  for (int s = 0; s < kSymmetryCount; ++s) {
    for (int i = 0; i < kCellCount; ++i) {
      const Vec3 centred = cell_at(i) - Vec3{1, 1, 1};
      out[s][i] = static_cast<std::uint8_t>(cell_index(syms[s].apply(centred) + Vec3{1, 1, 1}));
    }
  }
  return out;
}

std::array<CellMask, kCellCount> build_neighbors() {
  std::array<CellMask, kCellCount> out{};
  constexpr std::array<Vec3, 6> dirs{{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};
  for (int i = 0; i < kCellCount; ++i)
    for (const Vec3 d : dirs)
      if (const Vec3 n = cell_at(i) + d; in_bounds(n)) out[i] |= cell_bit(cell_index(n));
  return out;
}

}  // namespace

const std::array<Symmetry, kSymmetryCount>& cube_symmetries() {
  static const auto syms = build_symmetries();
  return syms;
}

const std::array<CellPermutation, kSymmetryCount>& cell_permutations() {
  static const auto perms = build_permutations();
  return perms;
}

CellMask transform_mask(CellMask mask, int symmetry) {
  const auto& perm = cell_permutations()[symmetry];
  CellMask out = 0;
  while (mask) {
    const int i = std::countr_zero(mask);
    mask &= mask - 1;
    out |= cell_bit(perm[i]);
  }
  return out;
}

const std::array<CellMask, kCellCount>& neighbor_masks() {
  static const auto n = build_neighbors();
  return n;
}

}  // namespace soma
