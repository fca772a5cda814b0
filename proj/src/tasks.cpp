#include "tuplesim/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tuplesim/corpus.hpp"
#include "tuplesim/errors.hpp"
#include "tuplesim/threads.hpp"
#include "tuplesim/util.hpp"

namespace tuplesim {

using nlohmann::json;

QuestionKind question_kind_from_string(std::string_view s) {
  if (s == "analogy5") return QuestionKind::Analogy5;
  if (s == "analogy10") return QuestionKind::Analogy10;
  if (s == "paraphrase7") return QuestionKind::Paraphrase7;
  if (s == "paraphrase14") return QuestionKind::Paraphrase14;
  throw data_error("unknown question kind: " + std::string(s));
}

std::string_view question_kind_to_string(QuestionKind k) {
  switch (k) {
    case QuestionKind::Analogy5: return "analogy5";
    case QuestionKind::Analogy10: return "analogy10";
    case QuestionKind::Paraphrase7: return "paraphrase7";
    case QuestionKind::Paraphrase14: return "paraphrase14";
  }
  throw std::invalid_argument("bad question kind value");
}

int tuple_size_for(QuestionKind kind) {
  switch (kind) {
    case QuestionKind::Analogy5:
    case QuestionKind::Analogy10: return 4;
    case QuestionKind::Paraphrase7:
    case QuestionKind::Paraphrase14: return 3;
  }
  throw std::invalid_argument("bad question kind value");
}

std::vector<std::string> Question::merged(int choice_index) const {
  if (choice_index < 0 || choice_index >= static_cast<int>(choices.size())) {
    throw std::invalid_argument("Question: choice index out of range");
  }
  const auto& choice = choices[static_cast<std::size_t>(choice_index)];
  const auto full = static_cast<std::size_t>(tuple_size_for(kind));
  if (choice.size() == full) return choice;
  std::vector<std::string> tuple = stem;
  tuple.insert(tuple.end(), choice.begin(), choice.end());
  if (tuple.size() != full) {
    throw data_error("question " + id + ": stem+choice is not a full tuple");
  }
  return tuple;
}

std::vector<std::vector<std::string>> expand_analogy_symmetries(
    const std::vector<std::string>& quadruple) {
  if (quadruple.size() != 4) {
    throw std::invalid_argument("expand_analogy_symmetries: need a quadruple");
  }
  const auto& a = quadruple[0];
  const auto& b = quadruple[1];
  const auto& c = quadruple[2];
  const auto& d = quadruple[3];
  return {{b, a, d, c}, {c, d, a, b}, {d, c, b, a}};
}

std::vector<LabeledTuple> labeled_tuples(const Question& q, std::size_t group) {
  std::vector<LabeledTuple> out;
  const bool analogy =
      q.kind == QuestionKind::Analogy5 || q.kind == QuestionKind::Analogy10;
  for (int ci = 0; ci < static_cast<int>(q.choices.size()); ++ci) {
    const bool positive = ci == q.solution;
    out.push_back({q.merged(ci), positive, group});
    if (positive && analogy) {
      for (auto& sym : expand_analogy_symmetries(q.merged(ci))) {
        out.push_back({std::move(sym), true, group});
      }
    }
  }
  return out;
}

Question make_ten_choice(const Question& five_choice) {
  if (five_choice.kind != QuestionKind::Analogy5) {
    throw std::invalid_argument("make_ten_choice: expected an analogy5 question");
  }
  Question q;
  q.id = five_choice.id;
  q.kind = QuestionKind::Analogy10;
  q.stem = five_choice.stem;
  for (int ci = 0; ci < static_cast<int>(five_choice.choices.size()); ++ci) {
    const auto full = five_choice.merged(ci);  // <a,b,c,d>
    q.choices.push_back(full);
    q.choices.push_back({full[0], full[3], full[2], full[1]});  // <a,d,c,b>
  }
  q.solution = 2 * five_choice.solution;
  return q;
}

Question make_fourteen_choice(const Question& seven_choice) {
  if (seven_choice.kind != QuestionKind::Paraphrase7) {
    throw std::invalid_argument("make_fourteen_choice: expected a paraphrase7 question");
  }
  Question q;
  q.id = seven_choice.id;
  q.kind = QuestionKind::Paraphrase14;
  q.stem = seven_choice.stem;
  for (int ci = 0; ci < static_cast<int>(seven_choice.choices.size()); ++ci) {
    const auto full = seven_choice.merged(ci);  // <a,b,c>
    q.choices.push_back(full);
    q.choices.push_back({full[1], full[0], full[2]});  // <b,a,c>
  }
  q.solution = 2 * seven_choice.solution;
  return q;
}

namespace {

void check_fingerprint(const Model& model, const FeatureSpec& spec) {
  if (model.spec_fingerprint != 0 && model.spec_fingerprint != spec.fingerprint()) {
    throw data_error("model was trained with a different feature layout");
  }
}

Matrix featurize_rows(const std::vector<std::vector<std::string>>& tuples,
                      const SpaceBundle& spaces, const FeatureSpec& spec) {
  Matrix x(static_cast<Eigen::Index>(tuples.size()),
           static_cast<Eigen::Index>(spec.total_length()));
  parallel_for(tuples.size(), [&](std::size_t i) {
    x.row(static_cast<Eigen::Index>(i)) = featurize(tuples[i], spaces, spec);
  });
  return x;
}

}  // namespace

int answer_question(const Model& model, const Question& q, const SpaceBundle& spaces,
                    const FeatureSpec& spec) {
  if (q.choices.empty()) throw data_error("question " + q.id + ": no choices");
  check_fingerprint(model, spec);
  int best = 0;
  double best_prob = -1.0;
  for (int ci = 0; ci < static_cast<int>(q.choices.size()); ++ci) {
    const double prob = predict_prob(model, featurize(q.merged(ci), spaces, spec));
    if (prob > best_prob) {  // strict: ties keep the lowest index
      best_prob = prob;
      best = ci;
    }
  }
  return best;
}

Model train_on_questions(const std::vector<Question>& questions,
                         const SpaceBundle& spaces, const FeatureSpec& spec,
                         const TrainOptions& options) {
  if (questions.empty()) throw data_error("train_on_questions: no questions");
  std::vector<std::vector<std::string>> tuples;
  std::vector<int> labels;
  for (std::size_t qi = 0; qi < questions.size(); ++qi) {
    for (auto& lt : labeled_tuples(questions[qi], qi)) {
      tuples.push_back(std::move(lt.tuple));
      labels.push_back(lt.positive ? 1 : -1);
    }
  }
  const TrainSet ts = TrainSet::build(featurize_rows(tuples, spaces, spec),
                                      std::move(labels));
  return train_calibrated(ts, options.smo, options.calibration, spec.fingerprint(),
                          options.config_json);
}

CrossValReport cross_validate(const std::vector<Question>& questions,
                              const SpaceBundle& spaces, const FeatureSpec& spec,
                              const TrainOptions& options, int folds,
                              std::uint64_t seed) {
  const auto nq = questions.size();
  if (folds < 2) throw std::invalid_argument("cross_validate: need >= 2 folds");
  if (nq < static_cast<std::size_t>(folds)) {
    throw data_error("cross_validate: more folds than questions");
  }

  // Question-level assignment: shuffle, then deal round-robin. All tuples of
  // a question inherit its fold, so no group ever spans a fold boundary.
  std::vector<std::size_t> order(nq);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<int> fold_of_question(nq, 0);
  for (std::size_t i = 0; i < nq; ++i) {
    fold_of_question[order[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
  }

  CrossValReport report;
  report.fold_of_question = fold_of_question;
  report.predicted.assign(nq, -1);
  report.folds.assign(static_cast<std::size_t>(folds), FoldReport{});

  parallel_for(static_cast<std::size_t>(folds), [&](std::size_t f) {
    std::vector<Question> train;
    std::vector<std::size_t> held_out;
    for (std::size_t qi = 0; qi < nq; ++qi) {
      if (fold_of_question[qi] == static_cast<int>(f)) {
        held_out.push_back(qi);
      } else {
        train.push_back(questions[qi]);
      }
    }
    const Model model = train_on_questions(train, spaces, spec, options);
    FoldReport& fr = report.folds[f];
    fr.fold = static_cast<int>(f);
    for (const std::size_t qi : held_out) {
      const int pred = answer_question(model, questions[qi], spaces, spec);
      report.predicted[qi] = pred;
      ++fr.n_questions;
      if (pred == questions[qi].solution) ++fr.n_correct;
    }
  });

  int total = 0;
  int correct = 0;
  for (const auto& fr : report.folds) {
    total += fr.n_questions;
    correct += fr.n_correct;
  }
  report.accuracy = total > 0 ? static_cast<double>(correct) / total : 0.0;
  return report;
}

double prototypicality_score(const Model& model,
                             const std::pair<std::string, std::string>& pair,
                             const ParadigmSet& paradigms, const SpaceBundle& spaces,
                             const FeatureSpec& spec) {
  if (paradigms.pairs.empty()) {
    throw data_error("prototypicality: empty paradigm set");
  }
  check_fingerprint(model, spec);
  double sum = 0.0;
  for (const auto& [pa, pb] : paradigms.pairs) {
    const std::vector<std::string> quad{pa, pb, pair.first, pair.second};
    sum += predict_prob(model, featurize(quad, spaces, spec));
  }
  return sum / static_cast<double>(paradigms.pairs.size());
}

namespace {

// Ranks with ties sharing their average (1-based).
std::vector<double> average_ranks(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&xs](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double shared = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("spearman: length mismatch");
  }
  if (xs.size() < 2) throw data_error("spearman: need at least two points");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw data_error("undefined correlation");
  return sxy / std::sqrt(sxx * syy);
}

HolisticResult generate_holistic_questions(const Lexicon& lexicon,
                                           const HolisticOptions& options) {
  struct Candidate {
    std::string term;       // a_b
    std::string first;      // a
    std::string second;     // b
  };
  std::vector<Candidate> bigrams;
  for (std::size_t row = 0; row < lexicon.size(); ++row) {
    const std::string& term = lexicon.term(row);
    const auto us = term.find('_');
    if (us == std::string::npos || us == 0 || us + 1 >= term.size()) continue;
    if (term.find('_', us + 1) != std::string::npos) continue;  // bigrams only
    bigrams.push_back({term, term.substr(0, us), term.substr(us + 1)});
  }

  std::set<std::vector<std::string>> excluded(options.exclude_stems.begin(),
                                              options.exclude_stems.end());
  Rng rng(options.seed);
  std::vector<std::size_t> order(bigrams.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  HolisticResult result;
  for (const std::size_t bi : order) {
    if (result.questions.size() >= options.n_questions) break;
    const Candidate& stem = bigrams[bi];
    if (excluded.count({stem.first, stem.second}) > 0) continue;

    std::vector<std::string> sharing;
    for (const Candidate& other : bigrams) {
      if (other.term == stem.term) continue;
      if (other.first == stem.first || other.first == stem.second ||
          other.second == stem.first || other.second == stem.second) {
        sharing.push_back(other.term);
      }
    }
    if (sharing.size() < static_cast<std::size_t>(options.n_sharing_distractors)) {
      ++result.skipped;
      continue;
    }
    rng.shuffle(sharing);
    sharing.resize(static_cast<std::size_t>(options.n_sharing_distractors));

    Question q;
    q.id = "holistic:" + stem.term;
    q.kind = QuestionKind::Paraphrase7;
    q.stem = {stem.first, stem.second};
    q.choices.push_back({stem.term});
    q.choices.push_back({stem.first});
    q.choices.push_back({stem.second});
    for (auto& term : sharing) q.choices.push_back({std::move(term)});

    // Shuffle choice order so the solution index carries no signal.
    std::vector<int> slots(q.choices.size());
    std::iota(slots.begin(), slots.end(), 0);
    rng.shuffle(slots);
    std::vector<std::vector<std::string>> shuffled(q.choices.size());
    for (std::size_t i = 0; i < slots.size(); ++i) {
      shuffled[static_cast<std::size_t>(slots[i])] = std::move(q.choices[i]);
    }
    q.choices = std::move(shuffled);
    q.solution = slots[0];
    result.questions.push_back(std::move(q));
  }
  return result;
}

namespace {

Question question_from_json(const json& obj, std::size_t line_no) {
  const std::string where = "questions line " + std::to_string(line_no);
  Question q;
  try {
    q.id = obj.at("id").get<std::string>();
    q.kind = question_kind_from_string(obj.at("kind").get<std::string>());
    q.stem = obj.at("stem").get<std::vector<std::string>>();
    q.choices = obj.at("choices").get<std::vector<std::vector<std::string>>>();
    q.solution = obj.at("solution").get<int>();
  } catch (const json::exception& e) {
    throw data_error(where + ": " + e.what());
  }
  if (q.choices.empty()) throw data_error(where + ": no choices");
  if (q.solution < 0 || q.solution >= static_cast<int>(q.choices.size())) {
    throw data_error(where + ": solution index out of range");
  }
  const auto full = static_cast<std::size_t>(tuple_size_for(q.kind));
  for (const auto& choice : q.choices) {
    if (choice.size() != full && q.stem.size() + choice.size() != full) {
      throw data_error(where + ": choice does not complete a tuple");
    }
    for (const auto& term : choice) {
      if (term.empty()) throw data_error(where + ": empty term");
    }
  }
  return q;
}

bool looks_like_question(const json& obj) {
  return obj.is_object() && obj.contains("kind") && obj.contains("choices");
}

}  // namespace

std::vector<Question> parse_questions_jsonl(std::string_view text) {
  std::vector<Question> questions;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool first_content_line = true;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.size() > 0 && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::exception& e) {
      throw data_error("questions line " + std::to_string(line_no) + ": " + e.what());
    }
    if (first_content_line && !looks_like_question(obj)) {
      first_content_line = false;  // provenance header
      continue;
    }
    first_content_line = false;
    questions.push_back(question_from_json(obj, line_no));
  }
  return questions;
}

std::string questions_to_jsonl(const std::vector<Question>& questions,
                               const std::string& provenance_json) {
  std::ostringstream out;
  if (!provenance_json.empty()) out << provenance_json << '\n';
  for (const auto& q : questions) {
    json obj;
    obj["id"] = q.id;
    obj["kind"] = question_kind_to_string(q.kind);
    obj["stem"] = q.stem;
    obj["choices"] = q.choices;
    obj["solution"] = q.solution;
    out << obj.dump() << '\n';
  }
  return out.str();
}

std::vector<Question> load_questions(const std::string& path) {
  return parse_questions_jsonl(read_text_file(path));
}

void save_questions(const std::string& path, const std::vector<Question>& questions,
                    const std::string& provenance_json) {
  write_text_file(path, questions_to_jsonl(questions, provenance_json));
}

std::vector<ParadigmSet> load_paradigms(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<ParadigmSet> sets;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "paradigms line " + std::to_string(line_no);
    try {
      const json obj = json::parse(line);
      ParadigmSet set;
      set.subcategory = obj.at("subcategory").get<std::string>();
      for (const auto& pair : obj.at("pairs")) {
        if (!pair.is_array() || pair.size() != 2) {
          throw data_error(where + ": pairs must be [w1, w2]");
        }
        set.pairs.emplace_back(pair.at(0).get<std::string>(),
                               pair.at(1).get<std::string>());
      }
      if (set.pairs.empty()) throw data_error(where + ": no pairs");
      sets.push_back(std::move(set));
    } catch (const json::exception& e) {
      throw data_error(where + ": " + e.what());
    }
  }
  return sets;
}

std::vector<ScoredPair> load_scored_pairs(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<ScoredPair> pairs;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "scored pairs line " + std::to_string(line_no);
    try {
      const json obj = json::parse(line);
      ScoredPair sp;
      sp.subcategory = obj.at("subcategory").get<std::string>();
      const auto& pair = obj.at("pair");
      if (!pair.is_array() || pair.size() != 2) {
        throw data_error(where + ": pair must be [w1, w2]");
      }
      sp.pair = {pair.at(0).get<std::string>(), pair.at(1).get<std::string>()};
      if (obj.contains("gold")) sp.gold = obj.at("gold").get<double>();
      pairs.push_back(std::move(sp));
    } catch (const json::exception& e) {
      throw data_error(where + ": " + e.what());
    }
  }
  return pairs;
}

}  // namespace tuplesim
