#include "tuplesim/reports.hpp"

#include <cstdio>
#include <map>
#include <sstream>

#include "tuplesim/errors.hpp"

namespace tuplesim {

namespace {

std::string real6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string config_comment(const std::string& config_json) {
  return "# config " + (config_json.empty() ? "{}" : config_json) + "\n";
}

std::string pairs_field(const std::vector<PairIndex>& pairs) {
  std::string out;
  for (const auto& [i, j] : pairs) {
    if (!out.empty()) out += ';';
    out += std::to_string(i) + "-" + std::to_string(j);
  }
  return out;
}

}  // namespace

std::string answer_report_csv(const std::vector<AnswerRow>& rows,
                              const std::string& config_json) {
  std::ostringstream out;
  out << config_comment(config_json);
  out << "question_id,predicted,solution,correct,n_choices\n";
  for (const auto& r : rows) {
    out << r.question_id << ',' << r.predicted << ',' << r.solution << ','
        << (r.predicted == r.solution ? 1 : 0) << ',' << r.n_choices << '\n';
  }
  return out.str();
}

std::string answer_summary(const std::vector<AnswerRow>& rows,
                           const std::string& config_json) {
  int correct = 0;
  double baseline = 0.0;
  for (const auto& r : rows) {
    if (r.predicted == r.solution) ++correct;
    if (r.n_choices > 0) baseline += 1.0 / r.n_choices;
  }
  std::ostringstream out;
  out << "questions: " << rows.size() << "\ncorrect: " << correct << "\naccuracy: "
      << (rows.empty() ? "n/a" : real6(static_cast<double>(correct) /
                                       static_cast<double>(rows.size())))
      << "\nrandom baseline: "
      << (rows.empty() ? "n/a" : real6(baseline / static_cast<double>(rows.size())))
      << "\nconfig: " << config_json << '\n';
  return out.str();
}

std::string crossval_report_csv(const std::vector<Question>& questions,
                                const CrossValReport& report,
                                const std::string& config_json) {
  if (questions.size() != report.predicted.size() ||
      questions.size() != report.fold_of_question.size()) {
    throw std::invalid_argument("crossval_report_csv: size mismatch");
  }
  std::ostringstream out;
  out << config_comment(config_json);
  out << "question_id,fold,predicted,solution,correct\n";
  for (std::size_t i = 0; i < questions.size(); ++i) {
    out << questions[i].id << ',' << report.fold_of_question[i] << ','
        << report.predicted[i] << ',' << questions[i].solution << ','
        << (report.predicted[i] == questions[i].solution ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string crossval_summary(const std::vector<Question>& questions,
                             const CrossValReport& report,
                             const std::string& config_json) {
  std::ostringstream out;
  out << "questions: " << questions.size() << "\nfolds: " << report.folds.size()
      << "\n";
  for (const auto& f : report.folds) {
    out << "fold " << f.fold << ": " << f.n_correct << "/" << f.n_questions << "\n";
  }
  double baseline = 0.0;
  for (const auto& q : questions) {
    if (!q.choices.empty()) baseline += 1.0 / static_cast<double>(q.choices.size());
  }
  out << "accuracy: " << real6(report.accuracy) << "\nrandom baseline: "
      << (questions.empty()
              ? "n/a"
              : real6(baseline / static_cast<double>(questions.size())))
      << "\nconfig: " << config_json << '\n';
  return out.str();
}

std::string prototypicality_report_csv(const std::vector<PrototypicalityRow>& rows,
                                       const std::string& config_json) {
  std::ostringstream out;
  out << config_comment(config_json);
  out << "subcategory,w1,w2,score,gold\n";
  for (const auto& r : rows) {
    out << r.subcategory << ',' << r.w1 << ',' << r.w2 << ',' << real6(r.score)
        << ',' << (r.gold ? real6(*r.gold) : std::string()) << '\n';
  }
  return out.str();
}

std::string prototypicality_summary(const std::vector<SubcategorySpearman>& rhos,
                                    const std::string& config_json) {
  std::ostringstream out;
  double sum = 0.0;
  for (const auto& r : rhos) {
    out << r.subcategory << ": rho " << real6(r.rho) << " over " << r.n_pairs
        << " pairs\n";
    sum += r.rho;
  }
  if (!rhos.empty()) {
    out << "mean rho: " << real6(sum / static_cast<double>(rhos.size())) << '\n';
  }
  out << "subcategories: " << rhos.size() << "\nconfig: " << config_json << '\n';
  return out.str();
}

std::vector<AblationRow> ablation_grid() {
  // Rows 1-10 per task: the dual-space baseline, the full set, each block
  // dropped, then each block alone.
  const std::vector<std::pair<std::string, std::array<bool, 4>>> block_rows = {
      {"dual-space", {false, false, true, true}},
      {"full", {true, true, true, true}},
      {"no-lf", {false, true, true, true}},
      {"no-ppmi", {true, false, true, true}},
      {"no-dom", {true, true, false, true}},
      {"no-fun", {true, true, true, false}},
      {"lf-only", {true, false, false, false}},
      {"ppmi-only", {false, true, false, false}},
      {"dom-only", {false, false, true, false}},
      {"fun-only", {false, false, false, true}},
  };
  const std::vector<PairIndex> all_pairs = {{0, 1}, {0, 2}, {1, 2}};

  std::vector<AblationRow> rows;
  for (const char* table : {"blocks-analogy10", "blocks-paraphrase14"}) {
    for (const auto& [label, blocks] : block_rows) {
      AblationRow row;
      row.table = table;
      row.label = label;
      row.blocks = blocks;
      // Empty pair list on block rows means "no restriction".
      rows.push_back(std::move(row));
    }
  }
  // Rows 21-28: every subset of the three unordered PPMI pairs, all blocks on.
  for (int mask = 0; mask < 8; ++mask) {
    AblationRow row;
    row.table = "ppmi-subsets";
    row.blocks = {true, true, true, true};
    std::string label = "ppmi:";
    for (int bit = 0; bit < 3; ++bit) {
      if ((mask >> bit & 1) == 0) continue;
      row.ppmi_pairs.push_back(all_pairs[static_cast<std::size_t>(bit)]);
      if (label.back() != ':') label += '+';
      label += std::to_string(all_pairs[static_cast<std::size_t>(bit)].first) +
               std::to_string(all_pairs[static_cast<std::size_t>(bit)].second);
    }
    if (row.ppmi_pairs.empty()) label += "none";
    row.label = std::move(label);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<AblationRow> run_ablation(const std::vector<Question>& analogy10,
                                      const std::vector<Question>& paraphrase14,
                                      const SpaceBundle& spaces,
                                      const TrainOptions& options, int folds,
                                      std::uint64_t seed) {
  std::vector<AblationRow> rows = ablation_grid();
  for (auto& row : rows) {
    const bool analogy = row.table == "blocks-analogy10";
    const auto& questions = analogy ? analogy10 : paraphrase14;
    FeatureSpec spec = FeatureSpec::make(analogy ? 4 : 3, spaces.grid);
    spec.blocks = row.blocks;
    if (row.table == "ppmi-subsets") {
      spec = ppmi_pair_subset_mask(std::move(spec), row.ppmi_pairs);
    }
    const CrossValReport cv =
        cross_validate(questions, spaces, spec, options, folds, seed);
    row.accuracy = cv.accuracy;
  }
  return rows;
}

std::string ablation_report_csv(const std::vector<AblationRow>& rows,
                                const std::string& config_json) {
  std::ostringstream out;
  out << config_comment(config_json);
  out << "table,label,lf,ppmi,dom,fun,ppmi_pairs,accuracy\n";
  for (const auto& r : rows) {
    out << r.table << ',' << r.label;
    for (const bool b : r.blocks) out << ',' << (b ? 1 : 0);
    out << ',' << pairs_field(r.ppmi_pairs) << ',' << real6(r.accuracy) << '\n';
  }
  return out.str();
}

}  // namespace tuplesim
