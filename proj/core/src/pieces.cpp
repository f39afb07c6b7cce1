#include "soma/pieces.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "soma/errors.hpp"

namespace soma {

std::vector<Vec3> normalize(std::vector<Vec3> cells) {
  if (cells.empty()) return cells;
  Vec3 lo = cells.front();
  for (const Vec3& c : cells) lo = {std::min(lo.x, c.x), std::min(lo.y, c.y), std::min(lo.z, c.z)};
  for (Vec3& c : cells) c = c - lo;
  std::sort(cells.begin(), cells.end());
  return cells;
}

CellMask shape_mask(std::span<const Vec3> cells) {
  CellMask mask = 0;
  for (const Vec3& c : cells) {
    if (!in_bounds(c)) throw FormatError("shape does not fit in a 3x3x3 box");
    mask |= cell_bit(cell_index(c));
  }
  return mask;
}

std::vector<Orientation> generate_orientations(const Piece& piece) {
  std::vector<Orientation> out;
  const auto& syms = cube_symmetries();
  for (int r = 0; r < kRotationCount; ++r) {
    std::vector<Vec3> rotated;
    rotated.reserve(piece.cells.size());
    for (const Vec3& c : piece.cells) rotated.push_back(syms[r].apply(c));
    rotated = normalize(std::move(rotated));
    const CellMask mask = shape_mask(rotated);
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Orientation& o) { return o.shape_mask == mask; });
    if (!seen) out.push_back({piece.id, r, std::move(rotated), mask});
  }
  std::sort(out.begin(), out.end(), [](const Orientation& a, const Orientation& b) { return a.shape_mask < b.shape_mask; });
  return out;
}

const std::vector<Piece>& standard_pieces() {
  static const std::vector<Piece> pieces = [] {
    std::vector<Piece> p{
        {1, "V", {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}},
        {2, "L", {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}}},
        {3, "T", {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, 1, 0}}},
        {4, "Z", {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {2, 1, 0}}},
        {5, "A", {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 1, 1}}},
        {6, "B", {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 0, 1}}},
        {7, "P", {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}},
    };
    for (Piece& piece : p) piece.cells = normalize(piece.cells);
    return p;
  }();
  return pieces;
}

std::vector<std::uint8_t> mirror_partners(std::span<const Piece> pieces) {
  int max_id = 0;
  for (const Piece& p : pieces) max_id = std::max(max_id, p.id);
  std::vector<std::uint8_t> partner(max_id + 1, 0);
  std::vector<std::vector<Orientation>> orients;
  for (const Piece& p : pieces) orients.push_back(generate_orientations(p));

  for (const Piece& p : pieces) {
    std::vector<Vec3> mirrored;
    for (const Vec3& c : p.cells) mirrored.push_back({-c.x, c.y, c.z});
    const CellMask mask = shape_mask(normalize(std::move(mirrored)));
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      const bool match =
          std::any_of(orients[j].begin(), orients[j].end(), [&](const Orientation& o) { return o.shape_mask == mask; });
      if (match) {
        partner[p.id] = static_cast<std::uint8_t>(pieces[j].id);
        break;
      }
    }
    if (partner[p.id] == 0) throw FormatError("piece " + p.name + " has no mirror partner in the set");
  }
  return partner;
}

std::vector<Piece> parse_pieces(std::istream& in) {
  std::vector<Piece> pieces;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    Piece p;
    if (!(fields >> p.id >> p.name)) throw ParseError("pieces line " + std::to_string(line_no) + ": expected id and name");
    std::string token;
    while (fields >> token) {
      Vec3 v;
      char c1 = 0, c2 = 0;
      std::istringstream t(token);
      if (!(t >> v.x >> c1 >> v.y >> c2 >> v.z) || c1 != ',' || c2 != ',')
        throw ParseError("pieces line " + std::to_string(line_no) + ": bad offset '" + token + "'");
      p.cells.push_back(v);
    }
    if (p.cells.empty()) throw ParseError("pieces line " + std::to_string(line_no) + ": piece has no cells");
    p.cells = normalize(std::move(p.cells));
    pieces.push_back(std::move(p));
  }
  return pieces;
}

std::vector<Piece> load_pieces(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open piece file " + path);
  return parse_pieces(in);
}

std::string format_pieces(std::span<const Piece> pieces) {
  std::ostringstream out;
  out << "# soma-pieces v1\n# id name offsets (x,y,z)\n";
  for (const Piece& p : pieces) {
    out << p.id << ' ' << p.name;
    for (const Vec3& c : p.cells) out << ' ' << c.x << ',' << c.y << ',' << c.z;
    out << '\n';
  }
  return out.str();
}

}  // namespace soma
