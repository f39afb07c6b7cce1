#include "soma/canonical.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "soma/errors.hpp"

namespace soma {

std::string CanonicalForm::to_string() const {
  std::string out(kCellCount, '0');
  for (int i = 0; i < kCellCount; ++i) {
    if (labels[i] > 9) throw FormatError("label does not fit in one character");
    out[i] = static_cast<char>('0' + labels[i]);
  }
  return out;
}

CanonicalForm CanonicalForm::parse(std::string_view text) {
  if (text.size() != kCellCount) throw ParseError("solution line must have 27 characters");
  CanonicalForm form;
  for (int i = 0; i < kCellCount; ++i) {
    if (text[i] < '0' || text[i] > '9') throw ParseError("solution line has a non-digit character");
    form.labels[i] = static_cast<std::uint8_t>(text[i] - '0');
  }
  return form;
}

Labeling transform_labels(const Labeling& labels, int symmetry, std::span<const std::uint8_t> mirror_labels) {
  const auto& perm = cell_permutations()[symmetry];
  const bool reflect = symmetry >= kRotationCount;
  Labeling out{};
  for (int i = 0; i < kCellCount; ++i) {
    const std::uint8_t l = labels[i];
    out[perm[i]] = reflect && l < mirror_labels.size() ? mirror_labels[l] : l;
  }
  return out;
}

CanonicalForm canonicalize(const Labeling& labels, std::span<const std::uint8_t> mirror_labels) {
  CanonicalForm best{labels};
  for (int s = 1; s < kSymmetryCount; ++s) {
    const Labeling t = transform_labels(labels, s, mirror_labels);
    if (t < best.labels) best.labels = t;
  }
  return best;
}

CanonicalForm canonicalize(const PuzzleState& state, const Catalog& catalog) {
  return canonicalize(state.labels(), catalog.mirror_labels());
}

int orbit_size(const Labeling& labels, std::span<const std::uint8_t> mirror_labels) {
  std::set<Labeling> orbit;
  for (int s = 0; s < kSymmetryCount; ++s) orbit.insert(transform_labels(labels, s, mirror_labels));
  return static_cast<int>(orbit.size());
}

namespace {

struct Enumerator {
  const Catalog& catalog;
  Labeling labels{};
  std::map<CanonicalForm, std::size_t> found;
  std::size_t raw = 0;

  void run(CellMask occupied, std::uint32_t used) {
    if (occupied == kFullMask) {
      ++raw;
      ++found[canonicalize(labels, catalog.mirror_labels())];
      return;
    }
    const int cell = std::countr_one(occupied);
    for (const int index : catalog.covering(cell)) {
      const Placement& p = catalog.placement(index);
      const std::uint32_t bit = 1u << p.piece_id;
      if ((used & bit) || (occupied & p.occupied)) continue;
      for (CellMask m = p.occupied; m; m &= m - 1) labels[std::countr_zero(m)] = static_cast<std::uint8_t>(p.piece_id);
      run(occupied | p.occupied, used | bit);
      for (CellMask m = p.occupied; m; m &= m - 1) labels[std::countr_zero(m)] = 0;
    }
  }
};

}  // namespace

SolutionEnumeration enumerate_all_solutions(const Catalog& catalog) {
  Enumerator e{catalog, {}, {}, 0};
  e.run(0, 0);
  SolutionEnumeration out;
  out.raw_count = e.raw;
  for (const auto& [form, count] : e.found) {
    out.canonical.push_back(form);
    out.multiplicity.push_back(count);
  }
  return out;
}

std::string format_solutions(std::span<const CanonicalForm> solutions) {
  std::string out;
  out.reserve(solutions.size() * (kCellCount + 1));
  for (const CanonicalForm& s : solutions) {
    out += s.to_string();
    out += '\n';
  }
  return out;
}

std::vector<CanonicalForm> parse_solutions(std::string_view text) {
  std::vector<CanonicalForm> out;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() != '#') out.push_back(CanonicalForm::parse(line));
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return out;
}

}  // namespace soma
