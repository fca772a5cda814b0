#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tuplesim/spaces.hpp"

namespace tuplesim {

enum class Block : std::uint8_t { LF = 0, PPMI = 1, Dom = 2, Fun = 3 };

using PairIndex = std::pair<int, int>;  // unordered, first < second

// Which features a tuple of size n maps to. Canonical layout:
//   block 1  LF(x_i), i ascending
//   block 2  ordered pairs (i, j), i != j, lexicographic; left then right
//   block 3  unordered pairs i < j lexicographic; k ascending; p ascending
//   block 4  same layout as block 3
// Disabled blocks and PPMI pair subsets are omitted, not zeroed.
struct FeatureSpec {
  int n = 2;
  GridSpec grid;
  std::array<bool, 4> blocks = {true, true, true, true};
  std::vector<PairIndex> ppmi_pairs;  // enabled unordered pairs; all by default

  static FeatureSpec make(int n, GridSpec grid);

  bool block_enabled(Block b) const { return blocks[static_cast<int>(b)]; }
  bool ppmi_pair_enabled(int i, int j) const;

  std::size_t lf_length() const;
  std::size_t ppmi_length() const;
  std::size_t pair_grid_length() const;  // one of the Dom/Fun blocks
  std::size_t total_length() const;

  std::vector<std::string> feature_names() const;
  std::uint64_t fingerprint() const;
};

// Restricts the PPMI block of a triple spec to the given unordered pairs.
// Valid pairs are (0,1), (0,2), (1,2); anything else throws.
FeatureSpec ppmi_pair_subset_mask(FeatureSpec spec, const std::vector<PairIndex>& subsets);

double lf(const FreqTable& freqs, const Lexicon& lexicon, std::string_view term);

Vector featurize(const std::vector<std::string>& tuple, const SpaceBundle& spaces,
                 const FeatureSpec& spec);

// One CSV row per tuple, preceded by a header row of feature names.
std::string feature_matrix_csv(const std::vector<std::vector<std::string>>& tuples,
                               const SpaceBundle& spaces, const FeatureSpec& spec);

}  // namespace tuplesim
