#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include "helpers.hpp"
#include "tuplesim/corpus.hpp"
#include "tuplesim/errors.hpp"
#include "tuplesim/util.hpp"

using namespace tuplesim;
using testutil::tiny_lexicon;

namespace {

// Brute-force nearest-neighbor oracle: for each lexicon token, scan outward
// one position at a time for the closest token passing `keep`.
template <typename Keep>
std::vector<CoocEvent> nearest_oracle(const std::vector<std::string>& tokens,
                                      const Lexicon& lexicon, CoocKind left_kind,
                                      CoocKind right_kind, Keep keep) {
  std::vector<CoocEvent> events;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto target = lexicon.row_of(tokens[i]);
    if (!target) continue;
    for (std::size_t d = 1; d <= i; ++d) {
      const auto row = lexicon.row_of(tokens[i - d]);
      if (row && keep(*row)) {
        events.push_back({static_cast<std::uint32_t>(*target),
                          static_cast<std::uint32_t>(*row), left_kind});
        break;
      }
    }
    for (std::size_t d = 1; i + d < tokens.size(); ++d) {
      const auto row = lexicon.row_of(tokens[i + d]);
      if (row && keep(*row)) {
        events.push_back({static_cast<std::uint32_t>(*target),
                          static_cast<std::uint32_t>(*row), right_kind});
        break;
      }
    }
  }
  return events;
}

std::vector<std::string> random_stream(Rng& rng, const Lexicon& lexicon,
                                       std::size_t len) {
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t pick = rng.index(lexicon.size() + 3);
    if (pick < lexicon.size()) {
      tokens.push_back(lexicon.term(pick));
    } else {
      tokens.push_back("oov" + std::to_string(pick));  // out of vocabulary
    }
  }
  return tokens;
}

void sort_both(std::vector<CoocEvent>& a, std::vector<CoocEvent>& b) {
  sort_events(a);
  sort_events(b);
}

}  // namespace

TEST_CASE("tokenize lowercases and strips punctuation") {
  Lexicon lex = tiny_lexicon();
  const auto tokens = tokenize("The CAT, stalks; the Bee!!", lex);
  CHECK(tokens == std::vector<std::string>{"the", "cat", "stalks", "the", "bee"});
}

TEST_CASE("tokenize keeps digits, underscores and non-ascii bytes") {
  Lexicon lex;
  lex.add("x1", Pos::Other);
  const auto tokens = tokenize("x1 CAFÉ pre_joined", lex);
  REQUIRE(tokens.size() == 3);
  CHECK(tokens[0] == "x1");
  CHECK(tokens[1] == "cafÉ");  // only ascii letters are case-folded
  CHECK(tokens[2] == "pre_joined");
}

TEST_CASE("tokenize merges multiword lexicon terms greedily, longest first") {
  Lexicon lex;
  lex.add("new_york", Pos::Noun);
  lex.add("new_york_city", Pos::Noun);
  lex.add("city", Pos::Noun);
  const auto tokens = tokenize("I love New York City and new york", lex);
  CHECK(std::count(tokens.begin(), tokens.end(), "new_york_city") == 1);
  CHECK(std::count(tokens.begin(), tokens.end(), "new_york") == 1);
  // The longer term consumed "city"; no stray token remains from it.
  CHECK(std::count(tokens.begin(), tokens.end(), "city") == 0);
}

TEST_CASE("tokenize is idempotent on its own output") {
  Lexicon lex = tiny_lexicon();
  Rng rng(11);
  for (int round = 0; round < 20; ++round) {
    const auto stream = random_stream(rng, lex, 60);
    std::ostringstream joined;
    for (const auto& t : stream) joined << t << ' ';
    const auto once = tokenize(joined.str(), lex);
    std::ostringstream again;
    for (const auto& t : once) again << t << ' ';
    CHECK(tokenize(again.str(), lex) == once);
  }
}

TEST_CASE("count_frequencies matches a map-based recount") {
  Lexicon lex = tiny_lexicon();
  Rng rng(5);
  const auto tokens = random_stream(rng, lex, 500);
  const FreqTable freqs = count_frequencies(tokens, lex);

  std::map<std::size_t, std::int64_t> expect;
  std::int64_t total = 0;
  for (const auto& t : tokens) {
    if (const auto row = lex.row_of(t)) {
      ++expect[*row];
      ++total;
    }
  }
  CHECK(freqs.total == total);
  for (std::size_t row = 0; row < lex.size(); ++row) {
    CHECK(freqs.count(row) == (expect.count(row) ? expect[row] : 0));
  }
  CHECK(freqs.count(lex.size() + 5) == 0);  // out of range reads as zero
}

TEST_CASE("count_frequencies rejects an empty lexicon") {
  Lexicon lex;
  CHECK_THROWS_AS(count_frequencies({"a", "b"}, lex), data_error);
}

TEST_CASE("unigram contexts equal the quadratic oracle on random streams") {
  Lexicon lex = tiny_lexicon();
  Rng rng(17);
  for (int round = 0; round < 30; ++round) {
    const auto tokens = random_stream(rng, lex, 80);
    auto got = extract_unigram_contexts(tokens, lex);
    auto want = nearest_oracle(tokens, lex, CoocKind::UnigramLeft,
                               CoocKind::UnigramRight,
                               [&](std::size_t row) { return lex.is_unigram(row); });
    sort_both(got, want);
    CHECK(got == want);
  }
}

TEST_CASE("noun contexts equal the quadratic oracle on random streams") {
  Lexicon lex = tiny_lexicon();
  Rng rng(19);
  for (int round = 0; round < 30; ++round) {
    const auto tokens = random_stream(rng, lex, 80);
    auto got = extract_noun_contexts(tokens, lex);
    auto want =
        nearest_oracle(tokens, lex, CoocKind::Noun, CoocKind::Noun,
                       [&](std::size_t row) { return lex.pos(row) == Pos::Noun; });
    sort_both(got, want);
    CHECK(got == want);
  }
}

TEST_CASE("verb patterns: first verb within the window on each side") {
  Lexicon lex = tiny_lexicon();
  const auto v1 = static_cast<std::uint32_t>(*lex.row_of("stalks"));
  const auto cat = *lex.row_of("cat");

  // cat is 2 left of stalks: within window 2, outside window 1.
  const std::vector<std::string> tokens = {"cat", "often", "stalks"};
  auto events = extract_verb_patterns(tokens, lex, 2);
  bool found = false;
  for (const auto& e : events) {
    if (e.target == cat) {
      CHECK(e.context == verb_pattern_context(v1, true));  // verb to the right
      found = true;
    }
  }
  CHECK(found);

  events = extract_verb_patterns(tokens, lex, 1);
  for (const auto& e : events) CHECK(e.target != cat);
}

TEST_CASE("verb patterns equal a windowed oracle on random streams") {
  Lexicon lex = tiny_lexicon();
  Rng rng(23);
  const int window = 3;
  for (int round = 0; round < 30; ++round) {
    const auto tokens = random_stream(rng, lex, 80);
    auto got = extract_verb_patterns(tokens, lex, window);

    std::vector<CoocEvent> want;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto target = lex.row_of(tokens[i]);
      if (!target) continue;
      for (std::size_t d = 1; d <= static_cast<std::size_t>(window) && d <= i; ++d) {
        const auto row = lex.row_of(tokens[i - d]);
        if (row && lex.pos(*row) == Pos::Verb) {
          want.push_back({static_cast<std::uint32_t>(*target),
                          verb_pattern_context(static_cast<std::uint32_t>(*row), false),
                          CoocKind::VerbPattern});
          break;
        }
      }
      for (std::size_t d = 1; d <= static_cast<std::size_t>(window) && i + d < tokens.size();
           ++d) {
        const auto row = lex.row_of(tokens[i + d]);
        if (row && lex.pos(*row) == Pos::Verb) {
          want.push_back({static_cast<std::uint32_t>(*target),
                          verb_pattern_context(static_cast<std::uint32_t>(*row), true),
                          CoocKind::VerbPattern});
          break;
        }
      }
    }
    sort_both(got, want);
    CHECK(got == want);
  }
}

TEST_CASE("verb pattern window must be positive") {
  Lexicon lex = tiny_lexicon();
  CHECK_THROWS_AS(extract_verb_patterns({"cat"}, lex, 0), std::invalid_argument);
}

TEST_CASE("event targets and term contexts are valid lexicon rows") {
  Lexicon lex = tiny_lexicon();
  Rng rng(29);
  const auto tokens = random_stream(rng, lex, 300);
  for (const auto& e : extract_unigram_contexts(tokens, lex)) {
    CHECK(e.target < lex.size());
    CHECK(e.context < lex.size());
  }
  for (const auto& e : extract_noun_contexts(tokens, lex)) {
    CHECK(e.target < lex.size());
    CHECK(e.context < lex.size());
  }
  for (const auto& e : extract_verb_patterns(tokens, lex, 5)) {
    CHECK(e.target < lex.size());
    CHECK(e.context < 2 * lex.size());
  }
}

TEST_CASE("sort_events orders by target, context, kind") {
  std::vector<CoocEvent> events = {{2, 1, CoocKind::Noun},
                                   {1, 5, CoocKind::UnigramRight},
                                   {1, 5, CoocKind::UnigramLeft},
                                   {1, 2, CoocKind::Noun}};
  sort_events(events);
  CHECK(events[0] == CoocEvent{1, 2, CoocKind::Noun});
  CHECK(events[1] == CoocEvent{1, 5, CoocKind::UnigramLeft});
  CHECK(events[2] == CoocEvent{1, 5, CoocKind::UnigramRight});
  CHECK(events[3] == CoocEvent{2, 1, CoocKind::Noun});
}

TEST_CASE("text file round trip and missing-file error") {
  const auto path = (std::filesystem::temp_directory_path() / "tuplesim_rt.txt").string();
  const std::string content = "line one\nline two\n";
  write_text_file(path, content);
  CHECK(read_text_file(path) == content);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file(path), data_error);
}
