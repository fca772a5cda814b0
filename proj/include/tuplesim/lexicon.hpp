#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tuplesim {

enum class Pos : std::uint8_t { Noun, Verb, Adj, Adv, Other };

Pos pos_from_string(std::string_view s);
std::string_view pos_to_string(Pos p);

struct LexiconEntry {
  std::string term;
  Pos pos = Pos::Other;
};

// Closed vocabulary of terms with POS tags. Row ids are dense and follow
// insertion order. Multiword terms are underscore-joined ("search_engine").
class Lexicon {
 public:
  Lexicon() = default;

  // Appends a term; throws data_error on duplicates or empty terms.
  std::size_t add(std::string term, Pos pos);

  std::optional<std::size_t> row_of(std::string_view term) const;
  bool contains(std::string_view term) const { return row_of(term).has_value(); }

  const LexiconEntry& entry(std::size_t row) const { return entries_[row]; }
  const std::string& term(std::size_t row) const { return entries_[row].term; }
  Pos pos(std::size_t row) const { return entries_[row].pos; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // A unigram is a term without the underscore join.
  static bool is_multiword(std::string_view term) {
    return term.find('_') != std::string_view::npos;
  }
  bool is_unigram(std::size_t row) const { return !is_multiword(entries_[row].term); }

  const std::vector<LexiconEntry>& entries() const { return entries_; }

  // TSV, one "term<TAB>pos" per line, UTF-8.
  static Lexicon load_tsv(const std::string& path);
  void save_tsv(const std::string& path) const;
  static Lexicon parse_tsv(std::string_view text);
  std::string to_tsv() const;

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace tuplesim
