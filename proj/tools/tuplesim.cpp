// Command-line front end: build-spaces, train, evaluate, generate.
//
// Every subcommand reads an optional JSON config file and applies flag
// overrides on top; the effective config is embedded in all outputs so a
// result file is self-describing. Exit codes: 0 success, 1 usage error,
// 2 bad data, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tuplesim/classifier.hpp"
#include "tuplesim/config.hpp"
#include "tuplesim/corpus.hpp"
#include "tuplesim/errors.hpp"
#include "tuplesim/features.hpp"
#include "tuplesim/lexicon.hpp"
#include "tuplesim/reports.hpp"
#include "tuplesim/spaces.hpp"
#include "tuplesim/synthetic.hpp"
#include "tuplesim/tasks.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tuplesim;

namespace {

// Flag values that override the config file when present.
struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> corpus;
  std::optional<std::string> lexicon;
  std::optional<std::string> spaces_dir;
  std::optional<std::string> questions;
  std::optional<std::string> model;
  std::optional<std::string> out_dir;
  std::vector<int> k_values;
  std::vector<double> p_values;
  std::optional<int> verb_window;
  std::optional<double> classifier_c;
  std::optional<double> classifier_tol;
  std::optional<std::string> calibration;
  std::optional<std::string> features;    // CSV of lf,ppmi,dom,fun or "all"
  std::optional<std::string> ppmi_pairs;  // e.g. "0-1,0-2"
  std::optional<std::uint64_t> seed;
  std::optional<int> folds;
};

std::vector<PairIndex> parse_pair_list(const std::string& text) {
  std::vector<PairIndex> pairs;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t dash = item.find('-');
    if (dash == std::string::npos) {
      throw std::invalid_argument("bad pair '" + item + "', expected i-j");
    }
    pairs.emplace_back(std::stoi(item.substr(0, dash)),
                       std::stoi(item.substr(dash + 1)));
    pos = comma + 1;
  }
  return pairs;
}

RunConfig effective_config(const Flags& f, const std::string& fallback_json = "") {
  RunConfig cfg;
  if (f.config) {
    cfg = RunConfig::load(*f.config);
  } else if (!fallback_json.empty()) {
    cfg = RunConfig::from_json(fallback_json);
  }
  if (f.corpus) cfg.corpus = *f.corpus;
  if (f.lexicon) cfg.lexicon = *f.lexicon;
  if (f.spaces_dir) cfg.spaces_dir = *f.spaces_dir;
  if (f.questions) cfg.questions = *f.questions;
  if (f.model) cfg.model = *f.model;
  if (f.out_dir) cfg.out_dir = *f.out_dir;
  if (!f.k_values.empty() || !f.p_values.empty()) {
    GridSpec grid = cfg.grid.value_or(GridSpec::defaults());
    if (!f.k_values.empty()) grid.k_values = f.k_values;
    if (!f.p_values.empty()) grid.p_values = f.p_values;
    cfg.grid = grid;
  }
  if (f.verb_window) cfg.verb_window = *f.verb_window;
  if (f.classifier_c) cfg.classifier_c = *f.classifier_c;
  if (f.classifier_tol) cfg.classifier_tol = *f.classifier_tol;
  if (f.calibration) {
    cfg.calibration = (*f.calibration == "internal_cv3") ? Calibration::InternalCv3
                                                         : Calibration::TrainingDecisions;
  }
  if (f.features) cfg.feature_blocks = parse_feature_blocks(*f.features);
  if (f.ppmi_pairs) cfg.ppmi_pairs = parse_pair_list(*f.ppmi_pairs);
  if (f.seed) cfg.seed = *f.seed;
  if (f.folds) cfg.folds = *f.folds;
  return cfg;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

// All questions in one run must featurize to the same tuple size.
int common_tuple_size(const std::vector<Question>& questions) {
  if (questions.empty()) throw data_error("no questions");
  const int n = tuple_size_for(questions.front().kind);
  for (const auto& q : questions) {
    if (tuple_size_for(q.kind) != n) {
      throw data_error("mixed tuple sizes in question set");
    }
  }
  return n;
}

void write_output(const std::string& out_dir, const std::string& name,
                  const std::string& content) {
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / name).string();
  write_text_file(path, content);
  std::cout << "wrote " << path << "\n";
}

int cmd_build_spaces(const Flags& flags) {
  RunConfig cfg = effective_config(flags);
  require(!cfg.corpus.empty(), "build-spaces needs --corpus or config.corpus");
  require(!cfg.lexicon.empty(), "build-spaces needs --lexicon or config.lexicon");
  require(!cfg.spaces_dir.empty(), "build-spaces needs --out or config.spaces_dir");

  const std::string corpus_text = read_text_file(cfg.corpus);
  const Lexicon lexicon = Lexicon::load_tsv(cfg.lexicon);

  BuildOptions options;
  options.grid = cfg.grid.value_or(GridSpec::defaults());
  options.verb_window = cfg.verb_window;
  const SpaceBundle bundle = build_space_bundle(corpus_text, lexicon, options);
  save_space_bundle(bundle, cfg.spaces_dir, cfg.to_json());

  std::cout << "spaces: " << bundle.lexicon.size() << " terms, domain rank "
            << bundle.domain->factors().rank() << ", function rank "
            << bundle.function->factors().rank() << " -> " << cfg.spaces_dir << "\n";
  return 0;
}

int cmd_train(const Flags& flags) {
  RunConfig cfg = effective_config(flags);
  require(!cfg.spaces_dir.empty(), "train needs --spaces or config.spaces_dir");
  require(!cfg.questions.empty(), "train needs --questions or config.questions");
  require(!cfg.model.empty(), "train needs --model or config.model");

  const SpaceBundle bundle = load_space_bundle(cfg.spaces_dir);
  const std::vector<Question> questions = load_questions(cfg.questions);
  const int n = common_tuple_size(questions);
  const FeatureSpec spec = cfg.feature_spec(n, bundle.grid);

  TrainOptions options{cfg.smo_params(), cfg.calibration, cfg.to_json()};
  const Model model = train_on_questions(questions, bundle, spec, options);
  save_model(model, cfg.model);

  std::size_t tuples = 0;
  int correct = 0;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    tuples += labeled_tuples(questions[i], i).size();
    if (answer_question(model, questions[i], bundle, spec) == questions[i].solution) {
      ++correct;
    }
  }
  std::cout << "trained on " << questions.size() << " questions (" << tuples
            << " tuples); train accuracy " << correct << "/" << questions.size()
            << "; model -> " << cfg.model << "\n";
  return 0;
}

int cmd_evaluate_answer(const Flags& flags) {
  // The model remembers the config it was trained with; flags can still
  // override, but a feature-spec mismatch is refused downstream.
  require(flags.model || flags.config, "evaluate --mode answer needs --model");
  std::string fallback;
  Model model;
  {
    RunConfig probe = effective_config(flags);
    require(!probe.model.empty(), "evaluate --mode answer needs --model");
    model = load_model(probe.model);
    fallback = flags.config ? "" : model.config_json;
  }
  RunConfig cfg = effective_config(flags, fallback);
  require(!cfg.spaces_dir.empty(), "evaluate needs --spaces or config.spaces_dir");
  require(!cfg.questions.empty(), "evaluate needs --questions or config.questions");

  const SpaceBundle bundle = load_space_bundle(cfg.spaces_dir);
  const std::vector<Question> questions = load_questions(cfg.questions);
  const int n = common_tuple_size(questions);
  const FeatureSpec spec = cfg.feature_spec(n, bundle.grid);

  std::vector<AnswerRow> rows;
  rows.reserve(questions.size());
  for (const auto& q : questions) {
    const int predicted = answer_question(model, q, bundle, spec);
    rows.push_back({q.id, predicted, q.solution, static_cast<int>(q.choices.size())});
  }
  const std::string cfg_json = cfg.to_json();
  write_output(cfg.out_dir, "answers.csv", answer_report_csv(rows, cfg_json));
  const std::string summary = answer_summary(rows, cfg_json);
  write_output(cfg.out_dir, "answers_summary.txt", summary);
  std::cout << summary;
  return 0;
}

int cmd_evaluate_crossval(const Flags& flags) {
  RunConfig cfg = effective_config(flags);
  require(!cfg.spaces_dir.empty(), "evaluate needs --spaces or config.spaces_dir");
  require(!cfg.questions.empty(), "evaluate needs --questions or config.questions");

  const SpaceBundle bundle = load_space_bundle(cfg.spaces_dir);
  const std::vector<Question> questions = load_questions(cfg.questions);
  const int n = common_tuple_size(questions);
  const FeatureSpec spec = cfg.feature_spec(n, bundle.grid);

  TrainOptions options{cfg.smo_params(), cfg.calibration, cfg.to_json()};
  const CrossValReport report =
      cross_validate(questions, bundle, spec, options, cfg.folds, cfg.seed);

  const std::string cfg_json = cfg.to_json();
  write_output(cfg.out_dir, "crossval.csv",
               crossval_report_csv(questions, report, cfg_json));
  const std::string summary = crossval_summary(questions, report, cfg_json);
  write_output(cfg.out_dir, "crossval_summary.txt", summary);
  std::cout << summary;
  return 0;
}

int cmd_evaluate_prototypicality(const Flags& flags, const std::string& paradigms_path,
                                 const std::string& pairs_path) {
  require(!paradigms_path.empty(), "prototypicality needs --paradigms");
  require(!pairs_path.empty(), "prototypicality needs --pairs");
  std::string fallback;
  Model model;
  {
    RunConfig probe = effective_config(flags);
    require(!probe.model.empty(), "evaluate --mode prototypicality needs --model");
    model = load_model(probe.model);
    fallback = flags.config ? "" : model.config_json;
  }
  RunConfig cfg = effective_config(flags, fallback);
  require(!cfg.spaces_dir.empty(), "evaluate needs --spaces or config.spaces_dir");

  const SpaceBundle bundle = load_space_bundle(cfg.spaces_dir);
  const std::vector<ParadigmSet> paradigms = load_paradigms(paradigms_path);
  const std::vector<ScoredPair> pairs = load_scored_pairs(pairs_path);
  const FeatureSpec spec = cfg.feature_spec(4, bundle.grid);

  std::vector<PrototypicalityRow> rows;
  rows.reserve(pairs.size());
  for (const auto& sp : pairs) {
    const ParadigmSet* set = nullptr;
    for (const auto& p : paradigms) {
      if (p.subcategory == sp.subcategory) {
        set = &p;
        break;
      }
    }
    if (set == nullptr) {
      throw data_error("no paradigm for subcategory: " + sp.subcategory);
    }
    const double score = prototypicality_score(model, sp.pair, *set, bundle, spec);
    rows.push_back({sp.subcategory, sp.pair.first, sp.pair.second, score, sp.gold});
  }

  // Rank correlation per subcategory over the pairs that carry a gold score.
  std::vector<SubcategorySpearman> rhos;
  for (const auto& p : paradigms) {
    std::vector<double> scores, golds;
    for (const auto& r : rows) {
      if (r.subcategory == p.subcategory && r.gold) {
        scores.push_back(r.score);
        golds.push_back(*r.gold);
      }
    }
    if (scores.size() >= 2) {
      rhos.push_back({p.subcategory, spearman(scores, golds),
                      static_cast<int>(scores.size())});
    }
  }

  const std::string cfg_json = cfg.to_json();
  write_output(cfg.out_dir, "prototypicality.csv",
               prototypicality_report_csv(rows, cfg_json));
  const std::string summary = prototypicality_summary(rhos, cfg_json);
  write_output(cfg.out_dir, "prototypicality_summary.txt", summary);
  std::cout << summary;
  return 0;
}

int cmd_evaluate_ablation(const Flags& flags, const std::string& analogy_path,
                          const std::string& paraphrase_path) {
  require(!analogy_path.empty(), "ablation needs --analogy");
  require(!paraphrase_path.empty(), "ablation needs --paraphrase");
  RunConfig cfg = effective_config(flags);
  require(!cfg.spaces_dir.empty(), "evaluate needs --spaces or config.spaces_dir");

  const SpaceBundle bundle = load_space_bundle(cfg.spaces_dir);

  // The ablation tables are defined over the shuffled-variant tasks;
  // plain five/seven-choice inputs are expanded on the fly.
  std::vector<Question> analogy10 = load_questions(analogy_path);
  for (auto& q : analogy10) {
    if (q.kind == QuestionKind::Analogy5) q = make_ten_choice(q);
  }
  std::vector<Question> paraphrase14 = load_questions(paraphrase_path);
  for (auto& q : paraphrase14) {
    if (q.kind == QuestionKind::Paraphrase7) q = make_fourteen_choice(q);
  }

  TrainOptions options{cfg.smo_params(), cfg.calibration, cfg.to_json()};
  const std::vector<AblationRow> rows =
      run_ablation(analogy10, paraphrase14, bundle, options, cfg.folds, cfg.seed);

  write_output(cfg.out_dir, "ablation.csv", ablation_report_csv(rows, cfg.to_json()));
  for (const auto& r : rows) {
    std::printf("%-20s %-16s %.6f\n", r.table.c_str(), r.label.c_str(), r.accuracy);
  }
  return 0;
}

int cmd_generate_holistic(const Flags& flags, std::size_t n_questions,
                          const std::string& exclude_path, int sharing,
                          const std::string& out_path) {
  RunConfig cfg = effective_config(flags);
  require(!cfg.lexicon.empty(), "generate --mode holistic needs --lexicon");
  require(!out_path.empty(), "generate --mode holistic needs --out");

  const Lexicon lexicon = Lexicon::load_tsv(cfg.lexicon);
  HolisticOptions options;
  options.n_questions = n_questions;
  options.seed = cfg.seed;
  options.n_sharing_distractors = sharing;
  if (!exclude_path.empty()) {
    for (const auto& q : load_questions(exclude_path)) {
      options.exclude_stems.push_back(q.stem);
    }
  }
  const HolisticResult result = generate_holistic_questions(lexicon, options);

  json provenance;
  provenance["generator"] = "holistic";
  provenance["seed"] = cfg.seed;
  provenance["requested"] = n_questions;
  provenance["skipped"] = result.skipped;
  provenance["config"] = json::parse(cfg.to_json());
  save_questions(out_path, result.questions, provenance.dump());

  std::cout << "wrote " << result.questions.size() << " questions -> " << out_path
            << "\n";
  if (result.skipped > 0) {
    std::cout << "warning: skipped " << result.skipped
              << " stems without enough sharing pseudo-unigrams\n";
  }
  return 0;
}

int cmd_generate_synthetic(const Flags& flags) {
  RunConfig cfg = effective_config(flags);
  require(!cfg.out_dir.empty(), "generate --mode synthetic needs --out-dir");

  SyntheticParams params;
  params.seed = cfg.seed;
  const SyntheticBenchmark bench = generate_synthetic_benchmark(params);

  fs::create_directories(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  write_text_file((dir / "corpus.txt").string(), bench.corpus);
  bench.lexicon.save_tsv((dir / "lexicon.tsv").string());

  json provenance;
  provenance["generator"] = "synthetic";
  provenance["seed"] = cfg.seed;
  save_questions((dir / "analogy5.jsonl").string(), bench.analogy5, provenance.dump());
  save_questions((dir / "paraphrase7.jsonl").string(), bench.paraphrase7,
                 provenance.dump());

  std::string paradigm_lines;
  for (const auto& p : bench.paradigms) {
    json obj;
    obj["subcategory"] = p.subcategory;
    json pair_list = json::array();
    for (const auto& [a, b] : p.pairs) pair_list.push_back(json::array({a, b}));
    obj["pairs"] = pair_list;
    paradigm_lines += obj.dump() + "\n";
  }
  write_text_file((dir / "paradigms.jsonl").string(), paradigm_lines);

  std::string pair_lines;
  for (const auto& sp : bench.scored_pairs) {
    json obj;
    obj["subcategory"] = sp.subcategory;
    obj["pair"] = json::array({sp.pair.first, sp.pair.second});
    if (sp.gold) obj["gold"] = *sp.gold;
    pair_lines += obj.dump() + "\n";
  }
  write_text_file((dir / "scored_pairs.jsonl").string(), pair_lines);

  std::cout << "synthetic benchmark: " << bench.lexicon.size() << " terms, "
            << bench.analogy5.size() << " analogy + " << bench.paraphrase7.size()
            << " paraphrase questions -> " << cfg.out_dir << "\n";
  return 0;
}

void add_common_flags(CLI::App* sub, Flags& flags) {
  sub->add_option("--config", flags.config, "JSON config file");
  sub->add_option("--seed", flags.seed, "random seed");
}

void add_classifier_flags(CLI::App* sub, Flags& flags) {
  sub->add_option("--features", flags.features,
                  "feature blocks, CSV of lf,ppmi,dom,fun (or 'all')");
  sub->add_option("--ppmi-pairs", flags.ppmi_pairs,
                  "restrict PPMI block to pairs, e.g. 0-1,0-2");
  sub->add_option("--c", flags.classifier_c, "SVM cost parameter");
  sub->add_option("--tol", flags.classifier_tol, "SMO stopping tolerance");
  sub->add_option("--calibration", flags.calibration, "probability calibration")
      ->check(CLI::IsMember({"training_decisions", "internal_cv3"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tuple similarity pipeline: spaces, features, classifier, tasks"};
  app.require_subcommand(1);

  Flags flags;
  std::string mode;
  std::string paradigms_path, pairs_path, analogy_path, paraphrase_path;
  std::string exclude_path, out_path;
  std::size_t n_questions = 680;
  int sharing = 4;

  CLI::App* build = app.add_subcommand("build-spaces", "build the space bundle");
  add_common_flags(build, flags);
  build->add_option("--corpus", flags.corpus, "corpus text file");
  build->add_option("--lexicon", flags.lexicon, "lexicon TSV file");
  build->add_option("--out", flags.spaces_dir, "output bundle directory");
  build->add_option("--k", flags.k_values, "grid k values");
  build->add_option("--p", flags.p_values, "grid p values");
  build->add_option("--verb-window", flags.verb_window, "verb search window");

  CLI::App* train = app.add_subcommand("train", "train a calibrated classifier");
  add_common_flags(train, flags);
  add_classifier_flags(train, flags);
  train->add_option("--spaces", flags.spaces_dir, "space bundle directory");
  train->add_option("--questions", flags.questions, "training questions JSONL");
  train->add_option("--model", flags.model, "output model file");

  CLI::App* evaluate = app.add_subcommand("evaluate", "run an evaluation mode");
  add_common_flags(evaluate, flags);
  add_classifier_flags(evaluate, flags);
  evaluate->add_option("--mode", mode, "answer | crossval | prototypicality | ablation")
      ->required()
      ->check(CLI::IsMember({"answer", "crossval", "prototypicality", "ablation"}));
  evaluate->add_option("--spaces", flags.spaces_dir, "space bundle directory");
  evaluate->add_option("--questions", flags.questions, "questions JSONL");
  evaluate->add_option("--model", flags.model, "model file (answer/prototypicality)");
  evaluate->add_option("--out", flags.out_dir, "report output directory");
  evaluate->add_option("--folds", flags.folds, "cross-validation folds");
  evaluate->add_option("--paradigms", paradigms_path, "paradigm pairs JSONL");
  evaluate->add_option("--pairs", pairs_path, "scored pairs JSONL");
  evaluate->add_option("--analogy", analogy_path, "analogy questions (ablation)");
  evaluate->add_option("--paraphrase", paraphrase_path, "paraphrase questions (ablation)");

  CLI::App* generate = app.add_subcommand("generate", "generate question sets");
  add_common_flags(generate, flags);
  generate->add_option("--mode", mode, "holistic | synthetic")
      ->required()
      ->check(CLI::IsMember({"holistic", "synthetic"}));
  generate->add_option("--lexicon", flags.lexicon, "lexicon TSV (holistic)");
  generate->add_option("--n", n_questions, "question budget (holistic)");
  generate->add_option("--sharing", sharing, "sharing distractors per question");
  generate->add_option("--exclude-stems", exclude_path,
                       "questions JSONL whose stems to exclude (holistic)");
  generate->add_option("--out", out_path, "output questions JSONL (holistic)");
  generate->add_option("--out-dir", flags.out_dir, "output directory (synthetic)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (build->parsed()) return cmd_build_spaces(flags);
    if (train->parsed()) return cmd_train(flags);
    if (evaluate->parsed()) {
      if (mode == "answer") return cmd_evaluate_answer(flags);
      if (mode == "crossval") return cmd_evaluate_crossval(flags);
      if (mode == "prototypicality") {
        return cmd_evaluate_prototypicality(flags, paradigms_path, pairs_path);
      }
      return cmd_evaluate_ablation(flags, analogy_path, paraphrase_path);
    }
    if (generate->parsed()) {
      if (mode == "holistic") {
        return cmd_generate_holistic(flags, n_questions, exclude_path, sharing, out_path);
      }
      return cmd_generate_synthetic(flags);
    }
  } catch (const data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
