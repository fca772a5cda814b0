#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tuplesim/lexicon.hpp"
#include "tuplesim/tasks.hpp"

namespace tuplesim {

// Knobs for the planted-structure benchmark generator. Defaults land near a
// 200-term lexicon and 50k corpus tokens.
struct SyntheticParams {
  std::uint64_t seed = 42;

  int n_families = 8;          // relation families for analogies
  int pairs_per_family = 5;    // (agent, object) pairs per family
  int topics_per_family = 2;   // topic nouns shared within a family
  int relation_reps = 18;      // "agent verb object" sentences per pair
  int topic_reps = 8;          // topic sentences per family member

  int n_synonym_groups = 12;   // bigram == unigram paraphrase groups
  int topics_per_group = 3;
  int synonym_reps = 24;       // bigram and unigram context sentences each

  int pseudo_modifiers = 4;    // pseudo-unigram grid for holistic questions
  int pseudo_heads = 4;
  int pseudo_reps = 8;

  int n_fillers = 20;
  int filler_tokens = 42000;   // noise stream appended to the corpus

  int n_analogy_questions = 60;
  int n_paraphrase_questions = 56;
};

struct SyntheticBenchmark {
  std::string corpus;
  Lexicon lexicon;
  std::vector<Question> analogy5;
  std::vector<Question> paraphrase7;
  // Ground truth for prototypicality scoring: one subcategory per family.
  std::vector<ParadigmSet> paradigms;
  std::vector<ScoredPair> scored_pairs;
};

// Deterministic in the seed, byte for byte. Plants topic clusters for the
// domain space, verb roles for the function space, relation families for
// analogy questions and bigram/unigram synonym groups for paraphrase
// questions.
SyntheticBenchmark generate_synthetic_benchmark(const SyntheticParams& params);

}  // namespace tuplesim
