#include "tuplesim/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tuplesim/corpus.hpp"
#include "tuplesim/errors.hpp"

namespace tuplesim {

using nlohmann::json;

namespace {

Calibration calibration_from_string(const std::string& s) {
  if (s == "training_decisions") return Calibration::TrainingDecisions;
  if (s == "internal_cv3") return Calibration::InternalCv3;
  throw data_error("unknown calibration mode: " + s);
}

std::string calibration_to_string(Calibration c) {
  return c == Calibration::InternalCv3 ? "internal_cv3" : "training_decisions";
}

std::vector<PairIndex> pairs_from_json(const json& arr) {
  std::vector<PairIndex> pairs;
  for (const auto& item : arr) {
    if (!item.is_array() || item.size() != 2) {
      throw data_error("config ppmi_pairs entries must be [i, j]");
    }
    pairs.emplace_back(item.at(0).get<int>(), item.at(1).get<int>());
  }
  return pairs;
}

}  // namespace

std::array<bool, 4> parse_feature_blocks(std::string_view csv) {
  std::array<bool, 4> blocks = {false, false, false, false};
  std::size_t start = 0;
  bool any = false;
  while (start <= csv.size()) {
    std::size_t end = csv.find(',', start);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view item = csv.substr(start, end - start);
    start = end + 1;
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item.empty()) continue;
    any = true;
    if (item == "all") {
      blocks = {true, true, true, true};
    } else if (item == "lf") {
      blocks[static_cast<int>(Block::LF)] = true;
    } else if (item == "ppmi") {
      blocks[static_cast<int>(Block::PPMI)] = true;
    } else if (item == "dom") {
      blocks[static_cast<int>(Block::Dom)] = true;
    } else if (item == "fun") {
      blocks[static_cast<int>(Block::Fun)] = true;
    } else {
      throw std::invalid_argument("unknown feature block: " + std::string(item));
    }
  }
  if (!any) throw std::invalid_argument("feature block list is empty");
  return blocks;
}

RunConfig RunConfig::from_json(const std::string& json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::exception& e) {
    throw data_error(std::string("bad config json: ") + e.what());
  }
  if (!obj.is_object()) throw data_error("config must be a json object");

  RunConfig cfg;
  try {
    for (const auto& [key, value] : obj.items()) {
      if (key == "corpus") {
        cfg.corpus = value.get<std::string>();
      } else if (key == "lexicon") {
        cfg.lexicon = value.get<std::string>();
      } else if (key == "spaces_dir") {
        cfg.spaces_dir = value.get<std::string>();
      } else if (key == "questions") {
        cfg.questions = value.get<std::string>();
      } else if (key == "model") {
        cfg.model = value.get<std::string>();
      } else if (key == "out_dir") {
        cfg.out_dir = value.get<std::string>();
      } else if (key == "grid") {
        GridSpec grid;
        grid.k_values = value.at("k_values").get<std::vector<int>>();
        grid.p_values = value.at("p_values").get<std::vector<double>>();
        if (grid.k_values.empty() || grid.p_values.empty()) {
          throw data_error("config grid must have k_values and p_values");
        }
        cfg.grid = std::move(grid);
      } else if (key == "verb_window") {
        cfg.verb_window = value.get<int>();
      } else if (key == "classifier_c") {
        cfg.classifier_c = value.get<double>();
      } else if (key == "classifier_tol") {
        cfg.classifier_tol = value.get<double>();
      } else if (key == "calibration") {
        cfg.calibration = calibration_from_string(value.get<std::string>());
      } else if (key == "feature_blocks") {
        cfg.feature_blocks = parse_feature_blocks(value.get<std::string>());
      } else if (key == "ppmi_pairs") {
        cfg.ppmi_pairs = pairs_from_json(value);
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "folds") {
        cfg.folds = value.get<int>();
      } else {
        throw data_error("unknown config key: " + key);
      }
    }
  } catch (const json::exception& e) {
    throw data_error(std::string("bad config value: ") + e.what());
  }
  if (cfg.verb_window < 1) throw data_error("config verb_window must be >= 1");
  if (cfg.classifier_c <= 0.0) throw data_error("config classifier_c must be > 0");
  if (cfg.classifier_tol <= 0.0) throw data_error("config classifier_tol must be > 0");
  if (cfg.folds < 2) throw data_error("config folds must be >= 2");
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  return from_json(read_text_file(path));
}

std::string RunConfig::to_json() const {
  json obj;
  obj["corpus"] = corpus;
  obj["lexicon"] = lexicon;
  obj["spaces_dir"] = spaces_dir;
  obj["questions"] = questions;
  obj["model"] = model;
  obj["out_dir"] = out_dir;
  if (grid) {
    obj["grid"] = {{"k_values", grid->k_values}, {"p_values", grid->p_values}};
  }
  obj["verb_window"] = verb_window;
  obj["classifier_c"] = classifier_c;
  obj["classifier_tol"] = classifier_tol;
  obj["calibration"] = calibration_to_string(calibration);
  std::string blocks;
  const char* names[] = {"lf", "ppmi", "dom", "fun"};
  for (int b = 0; b < 4; ++b) {
    if (!feature_blocks[static_cast<std::size_t>(b)]) continue;
    if (!blocks.empty()) blocks += ',';
    blocks += names[b];
  }
  obj["feature_blocks"] = blocks;
  json pairs = json::array();
  for (const auto& [i, j] : ppmi_pairs) pairs.push_back({i, j});
  obj["ppmi_pairs"] = pairs;
  obj["seed"] = seed;
  obj["folds"] = folds;
  return obj.dump();
}

FeatureSpec RunConfig::feature_spec(int n, const GridSpec& bundle_grid) const {
  FeatureSpec spec = FeatureSpec::make(n, bundle_grid);
  spec.blocks = feature_blocks;
  if (!ppmi_pairs.empty()) spec = ppmi_pair_subset_mask(spec, ppmi_pairs);
  return spec;
}

}  // namespace tuplesim
