// Drives the installed binary end to end: exit codes, output files and the
// embedded-config contract. Library calls are only used to prepare inputs
// and to parse what the binary wrote.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "tuplesim/classifier.hpp"
#include "tuplesim/corpus.hpp"
#include "tuplesim/lexicon.hpp"
#include "tuplesim/tasks.hpp"

using namespace tuplesim;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

CliResult run_cli(const testutil::TempDir& dir, const std::string& tag,
                  const std::string& args) {
  const std::string log = dir.file("cli_" + tag + ".log");
  const std::string cmd =
      std::string(TUPLESIM_CLI_PATH) + " " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult result;
  if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  result.output = read_text_file(log);
  return result;
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (const char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

// Writes the tiny fixture corpus and lexicon into the directory.
void write_tiny_inputs(const testutil::TempDir& dir) {
  write_text_file(dir.file("corpus.txt"), testutil::tiny_corpus());
  testutil::tiny_lexicon().save_tsv(dir.file("lexicon.tsv"));
}

std::string build_tiny_spaces(const testutil::TempDir& dir, const std::string& out) {
  return "build-spaces --corpus " + dir.file("corpus.txt") + " --lexicon " +
         dir.file("lexicon.tsv") + " --out " + dir.file(out) +
         " --k 2 --k 4 --p 0 --p 0.5 --p 1 --verb-window 3";
}

// Eight three-term paraphrase questions over the fixture nouns; accuracy is
// irrelevant here, only that training and evaluation run end to end.
std::vector<Question> tiny_paraphrase_questions() {
  const std::vector<std::string> nouns = {"ant", "bee", "cat", "dog",
                                          "elk", "fox", "gnu", "hen"};
  std::vector<Question> questions;
  for (int i = 0; i < 8; ++i) {
    Question q;
    q.id = "tiny" + std::to_string(i);
    q.kind = QuestionKind::Paraphrase7;
    q.stem = {nouns[static_cast<std::size_t>(i)],
              nouns[static_cast<std::size_t>((i + 1) % 8)]};
    for (int c = 0; c < 7; ++c) {
      q.choices.push_back({nouns[static_cast<std::size_t>((i + c) % 8)]});
    }
    q.solution = i % 7;
    questions.push_back(std::move(q));
  }
  return questions;
}

}  // namespace

TEST_CASE("usage errors exit with code 1") {
  testutil::TempDir dir;
  CHECK(run_cli(dir, "badflag", "build-spaces --bogus 1").exit_code == 1);
  CHECK(run_cli(dir, "nosub", "").exit_code == 1);
  // Required --mode missing.
  CHECK(run_cli(dir, "nomode", "evaluate").exit_code == 1);

  const CliResult missing = run_cli(dir, "nospaces", "train");
  CHECK(missing.exit_code == 1);
  CHECK(missing.output.find("usage error:") != std::string::npos);

  CHECK(run_cli(dir, "nomodel", "evaluate --mode answer").exit_code == 1);
}

TEST_CASE("bad input data exits with code 2") {
  testutil::TempDir dir;
  write_tiny_inputs(dir);

  // Unknown config key.
  write_text_file(dir.file("bad.json"), "{\"frobnicate\": 1}");
  const CliResult bad_key = run_cli(
      dir, "badkey", "build-spaces --config " + dir.file("bad.json"));
  CHECK(bad_key.exit_code == 2);
  CHECK(bad_key.output.find("unknown config key: frobnicate") != std::string::npos);

  // Missing config file.
  const CliResult no_file = run_cli(
      dir, "nofile", "build-spaces --config " + dir.file("absent.json"));
  CHECK(no_file.exit_code == 2);
  CHECK(no_file.output.find("cannot open file") != std::string::npos);

  // A corpus with no lexicon terms yields an empty count matrix.
  write_text_file(dir.file("empty.txt"), "xyzzy plugh .\n");
  const CliResult empty = run_cli(
      dir, "empty",
      "build-spaces --corpus " + dir.file("empty.txt") + " --lexicon " +
          dir.file("lexicon.tsv") + " --out " + dir.file("spaces") + " --k 2");
  CHECK(empty.exit_code == 2);
  CHECK(empty.output.find("empty counts") != std::string::npos);
}

TEST_CASE("space building is reproducible across runs") {
  testutil::TempDir dir;
  write_tiny_inputs(dir);

  const CliResult a = run_cli(dir, "build_a", build_tiny_spaces(dir, "spaces_a"));
  REQUIRE_MESSAGE(a.exit_code == 0, a.output);
  CHECK(a.output.find("spaces: 13 terms") != std::string::npos);
  const CliResult b = run_cli(dir, "build_b", build_tiny_spaces(dir, "spaces_b"));
  REQUIRE_MESSAGE(b.exit_code == 0, b.output);

  // The serialized matrices must match byte for byte; meta.json differs
  // only in the embedded output path.
  for (const char* name : {"raw_ppmi.bin", "domain.factors", "function.factors"}) {
    const std::string lhs = read_text_file(dir.file("spaces_a/") + name);
    const std::string rhs = read_text_file(dir.file("spaces_b/") + name);
    CHECK_MESSAGE(lhs == rhs, "mismatch in ", name);
  }
}

TEST_CASE("train, answer and crossval round the full pipeline") {
  testutil::TempDir dir;
  write_tiny_inputs(dir);
  REQUIRE(run_cli(dir, "build", build_tiny_spaces(dir, "spaces")).exit_code == 0);
  save_questions(dir.file("questions.jsonl"), tiny_paraphrase_questions(), "{}");

  const CliResult train = run_cli(
      dir, "train",
      "train --spaces " + dir.file("spaces") + " --questions " +
          dir.file("questions.jsonl") + " --model " + dir.file("model.bin") +
          " --c 4");
  REQUIRE_MESSAGE(train.exit_code == 0, train.output);
  CHECK(train.output.find("trained on 8 questions") != std::string::npos);
  const Model model = load_model(dir.file("model.bin"));
  CHECK_FALSE(model.config_json.empty());

  const CliResult answer = run_cli(
      dir, "answer",
      "evaluate --mode answer --model " + dir.file("model.bin") + " --spaces " +
          dir.file("spaces") + " --questions " + dir.file("questions.jsonl") +
          " --out " + dir.file("answers"));
  REQUIRE_MESSAGE(answer.exit_code == 0, answer.output);
  const std::string answers_csv = read_text_file(dir.file("answers/answers.csv"));
  CHECK(answers_csv.rfind("# config {", 0) == 0);
  CHECK(line_count(answers_csv) == 2 + 8);
  const std::string summary = read_text_file(dir.file("answers/answers_summary.txt"));
  CHECK(summary.find("questions: 8") != std::string::npos);

  // Evaluating with a different feature set must be refused: the model
  // remembers the feature layout it was trained on.
  const CliResult mismatch = run_cli(
      dir, "mismatch",
      "evaluate --mode answer --model " + dir.file("model.bin") + " --spaces " +
          dir.file("spaces") + " --questions " + dir.file("questions.jsonl") +
          " --out " + dir.file("answers2") + " --features lf");
  CHECK(mismatch.exit_code == 2);

  const CliResult cv = run_cli(
      dir, "crossval",
      "evaluate --mode crossval --spaces " + dir.file("spaces") +
          " --questions " + dir.file("questions.jsonl") + " --folds 2 --seed 5" +
          " --out " + dir.file("cv") + " --c 4");
  REQUIRE_MESSAGE(cv.exit_code == 0, cv.output);
  const std::string cv_csv = read_text_file(dir.file("cv/crossval.csv"));
  CHECK(line_count(cv_csv) == 2 + 8);
  CHECK(read_text_file(dir.file("cv/crossval_summary.txt")).find("folds: 2") !=
        std::string::npos);
}

TEST_CASE("holistic generation warns when no stem qualifies") {
  testutil::TempDir dir;
  write_tiny_inputs(dir);
  // The fixture lexicon has a single multiword term, so every stem lacks
  // sharing distractors.
  const CliResult holistic = run_cli(
      dir, "holistic",
      "generate --mode holistic --lexicon " + dir.file("lexicon.tsv") +
          " --n 5 --out " + dir.file("holistic.jsonl"));
  REQUIRE_MESSAGE(holistic.exit_code == 0, holistic.output);
  CHECK(holistic.output.find("wrote 0 questions") != std::string::npos);
  CHECK(holistic.output.find("warning: skipped 1") != std::string::npos);
  CHECK(load_questions(dir.file("holistic.jsonl")).empty());
}

TEST_CASE("synthetic generation emits a loadable benchmark") {
  testutil::TempDir dir;
  const CliResult gen = run_cli(
      dir, "synthetic",
      "generate --mode synthetic --out-dir " + dir.file("bench") + " --seed 11");
  REQUIRE_MESSAGE(gen.exit_code == 0, gen.output);
  CHECK(gen.output.find("220 terms") != std::string::npos);

  const Lexicon lexicon = Lexicon::load_tsv(dir.file("bench/lexicon.tsv"));
  CHECK(lexicon.size() == 220);

  const auto analogy = load_questions(dir.file("bench/analogy5.jsonl"));
  CHECK(analogy.size() == 60);
  const auto paraphrase = load_questions(dir.file("bench/paraphrase7.jsonl"));
  CHECK(paraphrase.size() == 56);
  CHECK(load_paradigms(dir.file("bench/paradigms.jsonl")).size() == 8);
  const auto pairs = load_scored_pairs(dir.file("bench/scored_pairs.jsonl"));
  CHECK(pairs.size() == 32);
  for (const auto& sp : pairs) CHECK(sp.gold.has_value());

  std::istringstream corpus(read_text_file(dir.file("bench/corpus.txt")));
  std::size_t words = 0;
  std::string word;
  while (corpus >> word) ++words;
  CHECK(words >= 48000);

  // The pseudo-unigram grid supports holistic question generation.
  const CliResult holistic = run_cli(
      dir, "holistic",
      "generate --mode holistic --lexicon " + dir.file("bench/lexicon.tsv") +
          " --n 5 --out " + dir.file("holistic.jsonl") + " --seed 2");
  REQUIRE_MESSAGE(holistic.exit_code == 0, holistic.output);
  const auto questions = load_questions(dir.file("holistic.jsonl"));
  CHECK(questions.size() == 5);
  for (const auto& q : questions) {
    CHECK(q.kind == QuestionKind::Paraphrase7);
    CHECK(q.choices.size() == 7);
    REQUIRE(q.stem.size() == 2);
    const auto& sol = q.choices[static_cast<std::size_t>(q.solution)];
    REQUIRE(sol.size() == 1);
    CHECK(sol[0] == q.stem[0] + "_" + q.stem[1]);
  }
}
