#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tuplesim/lexicon.hpp"

namespace tuplesim {

// Lowercased alphanumeric tokens (underscore counts as a word character,
// bytes >= 0x80 pass through), punctuation stripped. Adjacent words that
// spell a multiword lexicon term are greedily merged longest-first, so
// pseudo-unigrams come out as single tokens.
std::vector<std::string> tokenize(std::string_view text, const Lexicon& lexicon);

struct FreqTable {
  std::vector<std::int64_t> counts;  // indexed by lexicon row id
  std::int64_t total = 0;

  std::int64_t count(std::size_t row) const {
    return row < counts.size() ? counts[row] : 0;
  }
};

FreqTable count_frequencies(const std::vector<std::string>& tokens,
                            const Lexicon& lexicon);

enum class CoocKind : std::uint8_t { UnigramLeft, UnigramRight, Noun, VerbPattern };

// One co-occurrence observation. Context ids are namespaced per kind:
//   UnigramLeft/Right and Noun carry the context term's lexicon row;
//   VerbPattern packs (verb row, side) as 2*row + (side == right).
struct CoocEvent {
  std::uint32_t target = 0;
  std::uint32_t context = 0;
  CoocKind kind = CoocKind::UnigramLeft;

  friend bool operator==(const CoocEvent&, const CoocEvent&) = default;
};

inline std::uint32_t verb_pattern_context(std::uint32_t verb_row, bool right_side) {
  return 2 * verb_row + (right_side ? 1u : 0u);
}

// Nearest lexicon unigram on each side, skipping everything else.
std::vector<CoocEvent> extract_unigram_contexts(const std::vector<std::string>& tokens,
                                                const Lexicon& lexicon);

// Closest noun-tagged lexicon token on each side.
std::vector<CoocEvent> extract_noun_contexts(const std::vector<std::string>& tokens,
                                             const Lexicon& lexicon);

// Closest verb-tagged lexicon token within `window` positions on each side.
std::vector<CoocEvent> extract_verb_patterns(const std::vector<std::string>& tokens,
                                             const Lexicon& lexicon, int window);

// Canonical order (target, context, kind) so shard merges are deterministic.
void sort_events(std::vector<CoocEvent>& events);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace tuplesim
