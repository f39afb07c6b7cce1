#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soma/state.hpp"

namespace soma {

/// Lexicographically smallest labeling over the 48 cube symmetries.
///
/// Improper symmetries reflect the assembly, which turns each chiral piece
/// into its mirror partner, so labels are swapped through the catalog's
/// mirror map. Empty cells stay 0, which makes the same key work for
/// partial states.
struct CanonicalForm {
  Labeling labels{};

  friend auto operator<=>(const CanonicalForm&, const CanonicalForm&) = default;

  /// 27 characters, the piece id of each cell in linearization order
  /// ('0' for an empty cell).
  std::string to_string() const;
  static CanonicalForm parse(std::string_view text);
};

Labeling transform_labels(const Labeling& labels, int symmetry, std::span<const std::uint8_t> mirror_labels);

CanonicalForm canonicalize(const Labeling& labels, std::span<const std::uint8_t> mirror_labels);
CanonicalForm canonicalize(const PuzzleState& state, const Catalog& catalog = Catalog::standard());

/// Number of distinct labelings in the orbit of `labels`.
int orbit_size(const Labeling& labels, std::span<const std::uint8_t> mirror_labels);

struct SolutionEnumeration {
  std::vector<CanonicalForm> canonical;  // sorted, deduplicated
  std::vector<std::size_t> multiplicity;  // raw solutions per canonical entry
  std::size_t raw_count = 0;
};

/// Exhaustive depth-first enumeration (lowest empty cell first) of every
/// solution followed by canonical deduplication.
SolutionEnumeration enumerate_all_solutions(const Catalog& catalog = Catalog::standard());

/// One solution per line in the 27-character format.
std::string format_solutions(std::span<const CanonicalForm> solutions);
std::vector<CanonicalForm> parse_solutions(std::string_view text);

}  // namespace soma
