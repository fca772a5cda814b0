#include "tuplesim/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "tuplesim/errors.hpp"

namespace tuplesim {

namespace {

bool is_word_byte(unsigned char c) {
  if (c >= 0x80) return true;  // UTF-8 continuation/lead bytes pass through
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::string current;
  for (const char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                             : ch);
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::vector<std::string> split_components(std::string_view term) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= term.size()) {
    const std::size_t us = term.find('_', start);
    if (us == std::string_view::npos) {
      parts.emplace_back(term.substr(start));
      break;
    }
    parts.emplace_back(term.substr(start, us - start));
    start = us + 1;
  }
  return parts;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const Lexicon& lexicon) {
  std::vector<std::string> words = split_words(text);

  // Candidate multiword matches keyed by first component, longest first.
  std::unordered_map<std::string, std::vector<std::vector<std::string>>> multi;
  for (const auto& e : lexicon.entries()) {
    if (!Lexicon::is_multiword(e.term)) continue;
    auto parts = split_components(e.term);
    if (parts.size() < 2) continue;
    multi[parts.front()].push_back(std::move(parts));
  }
  for (auto& [first, cands] : multi) {
    std::stable_sort(cands.begin(), cands.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
  }
  if (multi.empty()) return words;

  std::vector<std::string> tokens;
  tokens.reserve(words.size());
  std::size_t i = 0;
  while (i < words.size()) {
    const auto it = multi.find(words[i]);
    std::size_t matched = 0;
    if (it != multi.end()) {
      for (const auto& parts : it->second) {
        if (i + parts.size() > words.size()) continue;
        bool ok = true;
        for (std::size_t j = 1; j < parts.size(); ++j) {
          if (words[i + j] != parts[j]) { ok = false; break; }
        }
        if (ok) { matched = parts.size(); break; }
      }
    }
    if (matched > 0) {
      std::string joined = words[i];
      for (std::size_t j = 1; j < matched; ++j) {
        joined.push_back('_');
        joined += words[i + j];
      }
      tokens.push_back(std::move(joined));
      i += matched;
    } else {
      tokens.push_back(std::move(words[i]));
      ++i;
    }
  }
  return tokens;
}

FreqTable count_frequencies(const std::vector<std::string>& tokens,
                            const Lexicon& lexicon) {
  if (lexicon.empty()) throw data_error("count_frequencies: empty lexicon");
  FreqTable table;
  table.counts.assign(lexicon.size(), 0);
  for (const auto& tok : tokens) {
    if (const auto row = lexicon.row_of(tok)) {
      ++table.counts[*row];
      ++table.total;
    }
  }
  return table;
}

namespace {

struct TokenInfo {
  std::int32_t row = -1;  // lexicon row or -1
  bool unigram = false;
  bool noun = false;
  bool verb = false;
};

std::vector<TokenInfo> annotate(const std::vector<std::string>& tokens,
                                const Lexicon& lexicon) {
  std::vector<TokenInfo> info(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto row = lexicon.row_of(tokens[i]);
    if (!row) continue;
    info[i].row = static_cast<std::int32_t>(*row);
    info[i].unigram = lexicon.is_unigram(*row);
    info[i].noun = lexicon.pos(*row) == Pos::Noun;
    info[i].verb = lexicon.pos(*row) == Pos::Verb;
  }
  return info;
}

}  // namespace

std::vector<CoocEvent> extract_unigram_contexts(const std::vector<std::string>& tokens,
                                                const Lexicon& lexicon) {
  const auto info = annotate(tokens, lexicon);
  const std::size_t n = tokens.size();

  // prev_uni[i] / next_uni[i]: nearest lexicon unigram strictly before/after i.
  std::vector<std::int64_t> prev_uni(n, -1), next_uni(n, -1);
  std::int64_t last = -1;
  for (std::size_t i = 0; i < n; ++i) {
    prev_uni[i] = last;
    if (info[i].row >= 0 && info[i].unigram) last = static_cast<std::int64_t>(i);
  }
  last = -1;
  for (std::size_t i = n; i-- > 0;) {
    next_uni[i] = last;
    if (info[i].row >= 0 && info[i].unigram) last = static_cast<std::int64_t>(i);
  }

  std::vector<CoocEvent> events;
  for (std::size_t i = 0; i < n; ++i) {
    if (info[i].row < 0) continue;
    if (prev_uni[i] >= 0) {
      events.push_back({static_cast<std::uint32_t>(info[i].row),
                        static_cast<std::uint32_t>(info[prev_uni[i]].row),
                        CoocKind::UnigramLeft});
    }
    if (next_uni[i] >= 0) {
      events.push_back({static_cast<std::uint32_t>(info[i].row),
                        static_cast<std::uint32_t>(info[next_uni[i]].row),
                        CoocKind::UnigramRight});
    }
  }
  return events;
}

std::vector<CoocEvent> extract_noun_contexts(const std::vector<std::string>& tokens,
                                             const Lexicon& lexicon) {
  const auto info = annotate(tokens, lexicon);
  const std::size_t n = tokens.size();

  std::vector<std::int64_t> prev_noun(n, -1), next_noun(n, -1);
  std::int64_t last = -1;
  for (std::size_t i = 0; i < n; ++i) {
    prev_noun[i] = last;
    if (info[i].row >= 0 && info[i].noun) last = static_cast<std::int64_t>(i);
  }
  last = -1;
  for (std::size_t i = n; i-- > 0;) {
    next_noun[i] = last;
    if (info[i].row >= 0 && info[i].noun) last = static_cast<std::int64_t>(i);
  }

  std::vector<CoocEvent> events;
  for (std::size_t i = 0; i < n; ++i) {
    if (info[i].row < 0) continue;
    if (prev_noun[i] >= 0) {
      events.push_back({static_cast<std::uint32_t>(info[i].row),
                        static_cast<std::uint32_t>(info[prev_noun[i]].row),
                        CoocKind::Noun});
    }
    if (next_noun[i] >= 0) {
      events.push_back({static_cast<std::uint32_t>(info[i].row),
                        static_cast<std::uint32_t>(info[next_noun[i]].row),
                        CoocKind::Noun});
    }
  }
  return events;
}

std::vector<CoocEvent> extract_verb_patterns(const std::vector<std::string>& tokens,
                                             const Lexicon& lexicon, int window) {
  if (window < 1) throw std::invalid_argument("extract_verb_patterns: window must be >= 1");
  const auto info = annotate(tokens, lexicon);
  const std::size_t n = tokens.size();

  std::vector<CoocEvent> events;
  for (std::size_t i = 0; i < n; ++i) {
    if (info[i].row < 0) continue;
    const auto target = static_cast<std::uint32_t>(info[i].row);
    for (std::size_t d = 1; d <= static_cast<std::size_t>(window) && d <= i; ++d) {
      const auto& c = info[i - d];
      if (c.row >= 0 && c.verb) {
        events.push_back({target,
                          verb_pattern_context(static_cast<std::uint32_t>(c.row), false),
                          CoocKind::VerbPattern});
        break;
      }
    }
    for (std::size_t d = 1; d <= static_cast<std::size_t>(window) && i + d < n; ++d) {
      const auto& c = info[i + d];
      if (c.row >= 0 && c.verb) {
        events.push_back({target,
                          verb_pattern_context(static_cast<std::uint32_t>(c.row), true),
                          CoocKind::VerbPattern});
        break;
      }
    }
  }
  return events;
}

void sort_events(std::vector<CoocEvent>& events) {
  std::sort(events.begin(), events.end(), [](const CoocEvent& a, const CoocEvent& b) {
    if (a.target != b.target) return a.target < b.target;
    if (a.context != b.context) return a.context < b.context;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write file: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace tuplesim
