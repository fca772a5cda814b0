#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tuplesim/classifier.hpp"
#include "tuplesim/features.hpp"
#include "tuplesim/spaces.hpp"

namespace tuplesim {

enum class QuestionKind : std::uint8_t { Analogy5, Analogy10, Paraphrase7, Paraphrase14 };

QuestionKind question_kind_from_string(std::string_view s);
std::string_view question_kind_to_string(QuestionKind k);

// Analogy questions classify quadruples, paraphrase questions triples.
int tuple_size_for(QuestionKind kind);

struct Question {
  std::string id;
  QuestionKind kind = QuestionKind::Analogy5;
  std::vector<std::string> stem;
  std::vector<std::vector<std::string>> choices;
  int solution = 0;

  // Stem merged with one choice: concatenation when the choice is partial,
  // the choice itself when it is already a full tuple (shuffled variants).
  std::vector<std::string> merged(int choice_index) const;
};

struct LabeledTuple {
  std::vector<std::string> tuple;
  bool positive = false;
  std::size_t group = 0;  // originating question, kept whole across folds
};

// The three symmetric forms of a positive proportional analogy
// <a,b,c,d>: <b,a,d,c>, <c,d,a,b>, <d,c,b,a>.
std::vector<std::vector<std::string>> expand_analogy_symmetries(
    const std::vector<std::string>& quadruple);

// Training examples for one question. Analogy positives are expanded through
// their symmetries; paraphrase tuples are used as-is.
std::vector<LabeledTuple> labeled_tuples(const Question& q, std::size_t group);

// Each five-choice pair <c,d> becomes <a,b,c,d> and the shuffle <a,d,c,b>.
Question make_ten_choice(const Question& five_choice);

// Each triple <a,b,c> is paired with the shuffle <b,a,c>; shuffles are negative.
Question make_fourteen_choice(const Question& seven_choice);

// Argmax of the per-choice probabilities; ties go to the lowest index.
int answer_question(const Model& model, const Question& q, const SpaceBundle& spaces,
                    const FeatureSpec& spec);

struct TrainOptions {
  SmoParams smo;
  Calibration calibration = Calibration::TrainingDecisions;
  std::string config_json = "{}";
};

Model train_on_questions(const std::vector<Question>& questions,
                         const SpaceBundle& spaces, const FeatureSpec& spec,
                         const TrainOptions& options);

struct FoldReport {
  int fold = 0;
  int n_questions = 0;
  int n_correct = 0;
};

struct CrossValReport {
  double accuracy = 0.0;
  std::vector<FoldReport> folds;
  std::vector<int> fold_of_question;
  std::vector<int> predicted;  // per question
};

// Question-grouped k-fold cross-validation: all tuples of a question share a
// fold. Deterministic given the seed.
CrossValReport cross_validate(const std::vector<Question>& questions,
                              const SpaceBundle& spaces, const FeatureSpec& spec,
                              const TrainOptions& options, int folds,
                              std::uint64_t seed);

struct ParadigmSet {
  std::string subcategory;
  std::vector<std::pair<std::string, std::string>> pairs;
};

// Mean probability of the quadruples (paradigm pair, scored pair).
double prototypicality_score(const Model& model, const std::pair<std::string, std::string>& pair,
                             const ParadigmSet& paradigms, const SpaceBundle& spaces,
                             const FeatureSpec& spec);

// Pearson correlation of ranks, average ranks for ties. Throws
// data_error("undefined correlation") when either input is constant.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

struct HolisticOptions {
  std::size_t n_questions = 680;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::string>> exclude_stems;
  int n_sharing_distractors = 4;
};

struct HolisticResult {
  std::vector<Question> questions;
  std::size_t skipped = 0;  // stems without enough sharing pseudo-unigrams
};

// Seven-choice training questions whose solution is the stem's
// pseudo-unigram; distractors are both component unigrams plus
// pseudo-unigrams sharing a component word.
HolisticResult generate_holistic_questions(const Lexicon& lexicon,
                                           const HolisticOptions& options);

// JSONL: {"id", "kind", "stem": [..], "choices": [[..],..], "solution": int}
// per line. A leading object without those keys is treated as a provenance
// header and skipped.
std::vector<Question> parse_questions_jsonl(std::string_view text);
std::string questions_to_jsonl(const std::vector<Question>& questions,
                               const std::string& provenance_json = "");
std::vector<Question> load_questions(const std::string& path);
void save_questions(const std::string& path, const std::vector<Question>& questions,
                    const std::string& provenance_json = "");

// Paradigm file: JSONL of {"subcategory", "pairs": [[w1,w2],..]}.
std::vector<ParadigmSet> load_paradigms(const std::string& path);

struct ScoredPair {
  std::string subcategory;
  std::pair<std::string, std::string> pair;
  std::optional<double> gold;
};

// JSONL of {"subcategory", "pair": [w1,w2], "gold": number (optional)}.
std::vector<ScoredPair> load_scored_pairs(const std::string& path);

}  // namespace tuplesim
