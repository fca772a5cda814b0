#pragma once

#include <string>
#include <vector>

#include "tuplesim/config.hpp"
#include "tuplesim/tasks.hpp"

namespace tuplesim {

struct AnswerRow {
  std::string question_id;
  int predicted = 0;
  int solution = 0;
  int n_choices = 0;
};

std::string answer_report_csv(const std::vector<AnswerRow>& rows,
                              const std::string& config_json);
std::string answer_summary(const std::vector<AnswerRow>& rows,
                           const std::string& config_json);

std::string crossval_report_csv(const std::vector<Question>& questions,
                                const CrossValReport& report,
                                const std::string& config_json);
std::string crossval_summary(const std::vector<Question>& questions,
                             const CrossValReport& report,
                             const std::string& config_json);

struct PrototypicalityRow {
  std::string subcategory;
  std::string w1, w2;
  double score = 0.0;
  std::optional<double> gold;
};

struct SubcategorySpearman {
  std::string subcategory;
  double rho = 0.0;
  int n_pairs = 0;
};

std::string prototypicality_report_csv(const std::vector<PrototypicalityRow>& rows,
                                       const std::string& config_json);
std::string prototypicality_summary(const std::vector<SubcategorySpearman>& rhos,
                                    const std::string& config_json);

// One cross-validated accuracy per ablation configuration: a block-subset
// table per task plus the PPMI pair-subset sweep.
struct AblationRow {
  std::string table;        // "blocks-analogy10" | "blocks-paraphrase14" | "ppmi-subsets"
  std::string label;
  std::array<bool, 4> blocks = {true, true, true, true};
  std::vector<PairIndex> ppmi_pairs;
  double accuracy = 0.0;
};

// The ten block-subset rows per task plus the eight PPMI pair-subset rows.
std::vector<AblationRow> ablation_grid();

std::vector<AblationRow> run_ablation(const std::vector<Question>& analogy10,
                                      const std::vector<Question>& paraphrase14,
                                      const SpaceBundle& spaces,
                                      const TrainOptions& options, int folds,
                                      std::uint64_t seed);

std::string ablation_report_csv(const std::vector<AblationRow>& rows,
                                const std::string& config_json);

}  // namespace tuplesim
