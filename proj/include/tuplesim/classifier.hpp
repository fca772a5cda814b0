#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tuplesim/linalg.hpp"

namespace tuplesim {

// Normalized third-order polynomial: K(x,y) = (x.y + c)^3 scaled so that
// K_hat(x,x) = 1. Bounded in [-1, 1] by Cauchy-Schwarz on (x, sqrt(c)).
double kernel(const Vector& x, const Vector& y, double offset = 1.0);

struct TrainSet {
  Matrix x;                   // one row per example, raw features
  std::vector<int> labels;    // +1 / -1

  // Per-feature standardization stats computed on this set.
  Vector mean;
  Vector stddev;

  // Validates shape, finiteness and label values; computes the stats.
  static TrainSet build(Matrix x, std::vector<int> labels);
  Vector standardize_row(const Vector& raw) const;
  Matrix standardized() const;
};

struct SmoParams {
  double c = 1.0;
  double tol = 1e-3;
  double kernel_offset = 1.0;
};

enum class Calibration { TrainingDecisions, InternalCv3 };

struct Model {
  Matrix support_vectors;  // standardized rows
  Vector coeffs;           // alpha_i * y_i
  double bias = 0.0;
  double kernel_offset = 1.0;
  double platt_a = 1.0;
  double platt_b = 0.0;
  Vector mean;
  Vector stddev;
  std::uint64_t spec_fingerprint = 0;
  std::string config_json = "{}";

  double decision(const Vector& raw) const;
  double decision_standardized(const Vector& std_row) const;
};

struct SmoResult {
  Vector alpha;
  double bias = 0.0;
  double dual_objective = 0.0;
  int iterations = 0;
};

// Dual SVM solved by sequential minimal optimization over the normalized
// polynomial kernel. Working pair selection is the maximal KKT violation,
// ties broken by lowest index, so runs are reproducible.
SmoResult train_smo_dual(const Matrix& standardized, const std::vector<int>& labels,
                         const SmoParams& params);

// Convenience wrapper: standardize, solve, keep support vectors.
Model train_smo(const TrainSet& ts, const SmoParams& params);

struct PlattParams {
  double a = 1.0;
  double b = 0.0;
};

// Sigmoid fit sigma(a*f + b) by Newton iterations on the smoothed-target
// negative log-likelihood; gradient norm <= 1e-10 within 200 iterations or
// numerical_error.
PlattParams platt_calibrate(const Vector& decisions, const std::vector<int>& labels);

Model train_calibrated(const TrainSet& ts, const SmoParams& params,
                       Calibration calibration, std::uint64_t fingerprint,
                       const std::string& config_json = "{}");

// sigma(A*f(standardize(x)) + B), clamped to the open interval (0, 1).
double predict_prob(const Model& model, const Vector& raw);

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace tuplesim
