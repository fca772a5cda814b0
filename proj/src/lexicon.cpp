#include "tuplesim/lexicon.hpp"

#include <fstream>
#include <sstream>

#include "tuplesim/errors.hpp"

namespace tuplesim {

Pos pos_from_string(std::string_view s) {
  if (s == "noun") return Pos::Noun;
  if (s == "verb") return Pos::Verb;
  if (s == "adj") return Pos::Adj;
  if (s == "adv") return Pos::Adv;
  if (s == "other") return Pos::Other;
  throw data_error("unknown POS tag: " + std::string(s));
}

std::string_view pos_to_string(Pos p) {
  switch (p) {
    case Pos::Noun: return "noun";
    case Pos::Verb: return "verb";
    case Pos::Adj: return "adj";
    case Pos::Adv: return "adv";
    case Pos::Other: return "other";
  }
  return "other";
}

std::size_t Lexicon::add(std::string term, Pos pos) {
  if (term.empty()) throw data_error("empty lexicon term");
  if (index_.contains(term)) throw data_error("duplicate lexicon term: " + term);
  const std::size_t row = entries_.size();
  index_.emplace(term, row);
  entries_.push_back({std::move(term), pos});
  return row;
}

std::optional<std::size_t> Lexicon::row_of(std::string_view term) const {
  // unordered_map has no heterogeneous lookup pre C++26 defaults; one copy.
  const auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Lexicon Lexicon::parse_tsv(std::string_view text) {
  Lexicon lex;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw data_error("lexicon line " + std::to_string(line_no) + ": missing tab");
    }
    try {
      lex.add(std::string(line.substr(0, tab)), pos_from_string(line.substr(tab + 1)));
    } catch (const data_error& e) {
      throw data_error("lexicon line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return lex;
}

std::string Lexicon::to_tsv() const {
  std::ostringstream out;
  for (const auto& e : entries_) {
    out << e.term << '\t' << pos_to_string(e.pos) << '\n';
  }
  return out.str();
}

Lexicon Lexicon::load_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open lexicon file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tsv(buf.str());
}

void Lexicon::save_tsv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write lexicon file: " + path);
  out << to_tsv();
}

}  // namespace tuplesim
