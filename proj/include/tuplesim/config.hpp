#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tuplesim/classifier.hpp"
#include "tuplesim/features.hpp"
#include "tuplesim/spaces.hpp"

namespace tuplesim {

// One config drives every subcommand; unknown keys are rejected so typos
// fail loudly instead of silently running defaults.
struct RunConfig {
  std::string corpus;
  std::string lexicon;
  std::string spaces_dir;
  std::string questions;
  std::string model;
  std::string out_dir = ".";

  std::optional<GridSpec> grid;  // default paper grid when absent
  int verb_window = 5;

  double classifier_c = 1.0;
  double classifier_tol = 1e-3;
  Calibration calibration = Calibration::TrainingDecisions;

  std::array<bool, 4> feature_blocks = {true, true, true, true};
  std::vector<PairIndex> ppmi_pairs;  // empty = all pairs

  std::uint64_t seed = 42;
  int folds = 10;

  static RunConfig from_json(const std::string& json_text);
  static RunConfig load(const std::string& path);
  std::string to_json() const;

  SmoParams smo_params() const { return {classifier_c, classifier_tol, 1.0}; }
  FeatureSpec feature_spec(int n, const GridSpec& bundle_grid) const;
};

std::array<bool, 4> parse_feature_blocks(std::string_view csv);

}  // namespace tuplesim
