#include "tuplesim/classifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "tuplesim/errors.hpp"

namespace tuplesim {

namespace {

double cube(double v) { return v * v * v; }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

Vector standardize(const Vector& raw, const Vector& mean, const Vector& stddev) {
  if (raw.size() != mean.size()) {
    throw std::invalid_argument("standardize: feature length mismatch");
  }
  Vector out(raw.size());
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    out(i) = stddev(i) > 0.0 ? (raw(i) - mean(i)) / stddev(i) : 0.0;
  }
  return out;
}

}  // namespace

double kernel(const Vector& x, const Vector& y, double offset) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("kernel: length mismatch");
  }
  const double kxy = cube(x.dot(y) + offset);
  const double den = cube(x.dot(x) + offset) * cube(y.dot(y) + offset);
  if (den <= 0.0) return 0.0;
  return kxy / std::sqrt(den);
}

TrainSet TrainSet::build(Matrix x, std::vector<int> labels) {
  if (static_cast<std::size_t>(x.rows()) != labels.size()) {
    throw std::invalid_argument("TrainSet: row/label count mismatch");
  }
  if (x.rows() < 2) throw data_error("TrainSet: need at least two examples");
  if (!x.allFinite()) throw data_error("TrainSet: non-finite feature value");
  int n_pos = 0;
  int n_neg = 0;
  for (const int y : labels) {
    if (y == 1) {
      ++n_pos;
    } else if (y == -1) {
      ++n_neg;
    } else {
      throw data_error("TrainSet: labels must be +1 or -1");
    }
  }
  if (n_pos == 0 || n_neg == 0) throw data_error("TrainSet: single-class set");

  TrainSet ts;
  ts.mean = x.colwise().mean();
  ts.stddev.resize(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double var = (x.col(j).array() - ts.mean(j)).square().mean();
    ts.stddev(j) = std::sqrt(var);
  }
  ts.x = std::move(x);
  ts.labels = std::move(labels);
  return ts;
}

Vector TrainSet::standardize_row(const Vector& raw) const {
  return standardize(raw, mean, stddev);
}

Matrix TrainSet::standardized() const {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out.row(i) = standardize_row(x.row(i));
  }
  return out;
}

double Model::decision_standardized(const Vector& std_row) const {
  const double self = std_row.dot(std_row) + kernel_offset;
  double sum = bias;
  for (Eigen::Index i = 0; i < support_vectors.rows(); ++i) {
    const double dot = support_vectors.row(i).dot(std_row);
    const double sv_self =
        support_vectors.row(i).dot(support_vectors.row(i)) + kernel_offset;
    const double den = cube(sv_self) * cube(self);
    if (den > 0.0) sum += coeffs(i) * cube(dot + kernel_offset) / std::sqrt(den);
  }
  return sum;
}

double Model::decision(const Vector& raw) const {
  return decision_standardized(standardize(raw, mean, stddev));
}

SmoResult train_smo_dual(const Matrix& standardized, const std::vector<int>& labels,
                         const SmoParams& params) {
  const Eigen::Index n = standardized.rows();
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw std::invalid_argument("train_smo_dual: row/label count mismatch");
  }
  if (params.c <= 0.0) throw std::invalid_argument("train_smo_dual: C must be > 0");
  if (params.tol <= 0.0) throw std::invalid_argument("train_smo_dual: tol must be > 0");

  // Normalized-kernel Gram matrix via one GEMM; diag(khat) = 1 exactly.
  const Matrix dots = standardized * standardized.transpose();
  Matrix khat(n, n);
  Vector self(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    self(i) = std::sqrt(cube(dots(i, i) + params.kernel_offset));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double den = self(i) * self(j);
      khat(i, j) = den > 0.0 ? cube(dots(i, j) + params.kernel_offset) / den : 0.0;
    }
  }

  const double c = params.c;
  Vector alpha = Vector::Zero(n);
  // grad of the minimization form 1/2 a'Qa - e'a, with Q_ij = y_i y_j khat_ij.
  Vector grad = Vector::Constant(n, -1.0);
  const auto y = [&labels](Eigen::Index i) {
    return static_cast<double>(labels[static_cast<std::size_t>(i)]);
  };

  const long max_updates = std::max<long>(10'000'000, 2000L * n * n);
  int updates = 0;
  for (long round = 0; round < max_updates; ++round) {
    // Most-violating pair: i maximizes -y*grad over the up set, j minimizes it
    // over the down set; ties go to the lowest index.
    Eigen::Index up = -1;
    Eigen::Index down = -1;
    double m_up = -std::numeric_limits<double>::infinity();
    double m_down = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = -y(i) * grad(i);
      const bool in_up = (y(i) > 0.0 && alpha(i) < c) || (y(i) < 0.0 && alpha(i) > 0.0);
      const bool in_down = (y(i) > 0.0 && alpha(i) > 0.0) || (y(i) < 0.0 && alpha(i) < c);
      if (in_up && v > m_up) {
        m_up = v;
        up = i;
      }
      if (in_down && v < m_down) {
        m_down = v;
        down = i;
      }
    }
    if (up < 0 || down < 0 || m_up - m_down <= params.tol) break;

    const Eigen::Index i = up;
    const Eigen::Index j = down;
    const double s = y(i) * y(j);
    const double ai = alpha(i);
    const double aj = alpha(j);
    double lo;
    double hi;
    if (s < 0.0) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(c, c + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - c);
      hi = std::min(c, ai + aj);
    }

    // E_i - E_j in decision terms equals y_j*(m_down_value) arithmetic below;
    // grad gives it directly: E_i = y_i*grad(i) ... bias-free difference.
    const double ei = y(i) * grad(i);  // f(x_i) - y_i, up to the shared bias
    const double ej = y(j) * grad(j);
    const double eta = khat(i, i) + khat(j, j) - 2.0 * khat(i, j);

    double aj_new;
    if (eta > 1e-12) {
      aj_new = std::clamp(aj + y(j) * (ei - ej) / eta, lo, hi);
    } else {
      // Degenerate direction: the objective is linear along the constraint
      // segment, so the best point is whichever endpoint beats the other.
      const double f1 = y(i) * ei - ai * khat(i, i) - s * aj * khat(i, j);
      const double f2 = y(j) * ej - s * ai * khat(i, j) - aj * khat(j, j);
      const double l1 = ai + s * (aj - lo);
      const double h1 = ai + s * (aj - hi);
      const double psi_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * khat(i, i) +
                            0.5 * lo * lo * khat(j, j) + s * lo * l1 * khat(i, j);
      const double psi_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * khat(i, i) +
                            0.5 * hi * hi * khat(j, j) + s * hi * h1 * khat(i, j);
      if (psi_lo < psi_hi - 1e-12) {
        aj_new = lo;
      } else if (psi_hi < psi_lo - 1e-12) {
        aj_new = hi;
      } else {
        // Near-tied endpoints happen when the feasible segment is tiny.
        // Walk downhill anyway — the slope along the segment has the sign
        // of -y_j here — so alpha snaps onto an exact bound and the pair
        // drops out of the violating set instead of stalling.
        aj_new = y(j) > 0.0 ? lo : hi;
      }
    }
    double ai_new = ai + s * (aj - aj_new);
    // Clamp arithmetic leaves ~1e-18 residue on the partner variable when a
    // pair lands on a box corner; snap such dust onto the exact bound so it
    // cannot keep a point in the violating sets (grad is updated with the
    // snapped deltas, so alpha and grad stay consistent).
    const double snap = 1e-12 * c;
    if (ai_new < snap) {
      ai_new = 0.0;
    } else if (ai_new > c - snap) {
      ai_new = c;
    }
    if (aj_new < snap) {
      aj_new = 0.0;
    } else if (aj_new > c - snap) {
      aj_new = c;
    }
    const double di = ai_new - ai;
    const double dj = aj_new - aj;
    if (di == 0.0 && dj == 0.0) {
      throw numerical_error("train_smo_dual: stalled on a degenerate pair");
    }
    alpha(i) = ai_new;
    alpha(j) = aj_new;
    for (Eigen::Index k = 0; k < n; ++k) {
      grad(k) += y(k) * (y(i) * khat(k, i) * di + y(j) * khat(k, j) * dj);
    }
    ++updates;
  }

  // Post-loop stop condition must hold; otherwise the cap was hit.
  {
    double m_up = -std::numeric_limits<double>::infinity();
    double m_down = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = -y(i) * grad(i);
      if ((y(i) > 0.0 && alpha(i) < c) || (y(i) < 0.0 && alpha(i) > 0.0)) {
        m_up = std::max(m_up, v);
      }
      if ((y(i) > 0.0 && alpha(i) > 0.0) || (y(i) < 0.0 && alpha(i) < c)) {
        m_down = std::min(m_down, v);
      }
    }
    if (m_up - m_down > params.tol) {
      throw numerical_error("train_smo_dual: failed to converge");
    }

    SmoResult result;
    result.alpha = alpha;
    result.iterations = updates;
    double obj = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) obj += alpha(i) * (1.0 - grad(i));
    result.dual_objective = 0.5 * obj;

    // Bias from free support vectors; midpoint of the KKT interval otherwise.
    double sum = 0.0;
    int free_svs = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (alpha(i) > 0.0 && alpha(i) < c) {
        sum += -y(i) * grad(i);
        ++free_svs;
      }
    }
    if (free_svs > 0) {
      result.bias = sum / free_svs;
    } else if (std::isfinite(m_up) && std::isfinite(m_down)) {
      result.bias = 0.5 * (m_up + m_down);
    }
    return result;
  }
}

Model train_smo(const TrainSet& ts, const SmoParams& params) {
  const Matrix std_x = ts.standardized();
  const SmoResult solved = train_smo_dual(std_x, ts.labels, params);

  Eigen::Index n_sv = 0;
  for (Eigen::Index i = 0; i < solved.alpha.size(); ++i) {
    if (solved.alpha(i) > 0.0) ++n_sv;
  }
  Model model;
  model.support_vectors.resize(n_sv, std_x.cols());
  model.coeffs.resize(n_sv);
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < solved.alpha.size(); ++i) {
    if (solved.alpha(i) <= 0.0) continue;
    model.support_vectors.row(at) = std_x.row(i);
    model.coeffs(at) = solved.alpha(i) * ts.labels[static_cast<std::size_t>(i)];
    ++at;
  }
  model.bias = solved.bias;
  model.kernel_offset = params.kernel_offset;
  model.mean = ts.mean;
  model.stddev = ts.stddev;
  return model;
}

PlattParams platt_calibrate(const Vector& decisions, const std::vector<int>& labels) {
  const Eigen::Index n = decisions.size();
  if (static_cast<std::size_t>(n) != labels.size()) {
    throw std::invalid_argument("platt_calibrate: size mismatch");
  }
  double n_pos = 0.0;
  double n_neg = 0.0;
  for (const int y : labels) {
    if (y == 1) {
      n_pos += 1.0;
    } else if (y == -1) {
      n_neg += 1.0;
    } else {
      throw data_error("platt_calibrate: labels must be +1 or -1");
    }
  }
  if (n_pos == 0.0 || n_neg == 0.0) {
    throw data_error("platt_calibrate: need both labels");
  }
  const double t_pos = (n_pos + 1.0) / (n_pos + 2.0);
  const double t_neg = 1.0 / (n_neg + 2.0);

  const auto nll = [&](double a, double b) {
    double f = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = labels[static_cast<std::size_t>(i)] == 1 ? t_pos : t_neg;
      const double z = a * decisions(i) + b;
      f += t * softplus(-z) + (1.0 - t) * softplus(z);
    }
    return f;
  };

  double a = 0.0;
  double b = std::log((n_neg + 1.0) / (n_pos + 1.0));
  // The smoothed targets put the optimum at finite (a, b); Newton steps with
  // halving line search reach gradient norm <= 1e-10 or we report failure.
  double f_cur = nll(a, b);
  constexpr int kMaxIterations = 200;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    double ga = 0.0;
    double gb = 0.0;
    double haa = 1e-12;
    double hab = 0.0;
    double hbb = 1e-12;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = labels[static_cast<std::size_t>(i)] == 1 ? t_pos : t_neg;
      const double z = a * decisions(i) + b;
      const double p = sigmoid(z);
      const double d = p - t;
      const double w = std::max(p * (1.0 - p), 1e-300);
      ga += decisions(i) * d;
      gb += d;
      haa += decisions(i) * decisions(i) * w;
      hab += decisions(i) * w;
      hbb += w;
    }
    if (std::sqrt(ga * ga + gb * gb) <= 1e-10) return {a, b};

    const double det = haa * hbb - hab * hab;
    if (det <= 0.0 || !std::isfinite(det)) {
      throw numerical_error("platt_calibrate: singular hessian");
    }
    const double da = -(hbb * ga - hab * gb) / det;
    const double db = -(haa * gb - hab * ga) / det;

    double step = 1.0;
    bool moved = false;
    for (int halvings = 0; halvings < 60; ++halvings) {
      const double f_new = nll(a + step * da, b + step * db);
      if (f_new <= f_cur + 1e-14 * std::abs(f_cur)) {
        a += step * da;
        b += step * db;
        f_cur = f_new;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) throw numerical_error("platt_calibrate: line search failed");
  }
  throw numerical_error("platt_calibrate: failed to converge");
}

namespace {

Vector training_decisions(const Model& model, const Matrix& std_x) {
  Vector out(std_x.rows());
  for (Eigen::Index i = 0; i < std_x.rows(); ++i) {
    out(i) = model.decision_standardized(std_x.row(i));
  }
  return out;
}

// Deterministic stratified 3-fold decisions; falls back to training decisions
// when a fold would lose one of the classes entirely.
bool cv3_decisions(const TrainSet& ts, const SmoParams& params, Vector& decisions) {
  const Eigen::Index n = ts.x.rows();
  std::vector<int> fold(static_cast<std::size_t>(n), 0);
  int pos_seen = 0;
  int neg_seen = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    int& seen = ts.labels[static_cast<std::size_t>(i)] == 1 ? pos_seen : neg_seen;
    fold[static_cast<std::size_t>(i)] = seen % 3;
    ++seen;
  }
  decisions.resize(n);
  for (int f = 0; f < 3; ++f) {
    Eigen::Index n_train = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (fold[static_cast<std::size_t>(i)] != f) ++n_train;
    }
    Matrix x(n_train, ts.x.cols());
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(n_train));
    Eigen::Index at = 0;
    bool any_pos = false;
    bool any_neg = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (fold[static_cast<std::size_t>(i)] == f) continue;
      x.row(at++) = ts.x.row(i);
      const int y = ts.labels[static_cast<std::size_t>(i)];
      labels.push_back(y);
      (y == 1 ? any_pos : any_neg) = true;
    }
    if (!any_pos || !any_neg || n_train < 2) return false;
    const Model part = train_smo(TrainSet::build(std::move(x), std::move(labels)),
                                 params);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (fold[static_cast<std::size_t>(i)] != f) continue;
      decisions(i) = part.decision(ts.x.row(i));
    }
  }
  return true;
}

}  // namespace

Model train_calibrated(const TrainSet& ts, const SmoParams& params,
                       Calibration calibration, std::uint64_t fingerprint,
                       const std::string& config_json) {
  Model model = train_smo(ts, params);
  Vector decisions;
  bool have = false;
  if (calibration == Calibration::InternalCv3) {
    have = cv3_decisions(ts, params, decisions);
  }
  if (!have) decisions = training_decisions(model, ts.standardized());
  const PlattParams platt = platt_calibrate(decisions, ts.labels);
  model.platt_a = platt.a;
  model.platt_b = platt.b;
  model.spec_fingerprint = fingerprint;
  model.config_json = config_json;
  return model;
}

double predict_prob(const Model& model, const Vector& raw) {
  const double f = model.decision(raw);
  const double p = sigmoid(model.platt_a * f + model.platt_b);
  return std::clamp(p, 1e-15, 1.0 - 1e-15);
}

namespace {

constexpr std::array<char, 4> kModelMagic = {'T', 'S', 'M', 'D'};
constexpr std::uint32_t kModelVersion = 1;

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw data_error("truncated model file: " + path);
  return value;
}

void put_vector(std::ofstream& out, const Vector& v) {
  put(out, static_cast<std::uint64_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) put(out, v(i));
}

Vector get_vector(std::ifstream& in, const std::string& path) {
  const auto size = get<std::uint64_t>(in, path);
  Vector v(static_cast<Eigen::Index>(size));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = get<double>(in, path);
  return v;
}

}  // namespace

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot write file: " + path);
  out.write(kModelMagic.data(), kModelMagic.size());
  put(out, kModelVersion);
  put(out, model.bias);
  put(out, model.kernel_offset);
  put(out, model.platt_a);
  put(out, model.platt_b);
  put(out, model.spec_fingerprint);
  put(out, static_cast<std::uint64_t>(model.config_json.size()));
  out.write(model.config_json.data(),
            static_cast<std::streamsize>(model.config_json.size()));
  put_vector(out, model.mean);
  put_vector(out, model.stddev);
  put_vector(out, model.coeffs);
  put(out, static_cast<std::uint64_t>(model.support_vectors.rows()));
  put(out, static_cast<std::uint64_t>(model.support_vectors.cols()));
  for (Eigen::Index i = 0; i < model.support_vectors.rows(); ++i) {
    for (Eigen::Index j = 0; j < model.support_vectors.cols(); ++j) {
      put(out, model.support_vectors(i, j));
    }
  }
  if (!out) throw data_error("cannot write file: " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open file: " + path);
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kModelMagic) throw data_error("bad model file magic: " + path);
  if (get<std::uint32_t>(in, path) != kModelVersion) {
    throw data_error("unsupported model file version: " + path);
  }
  Model model;
  model.bias = get<double>(in, path);
  model.kernel_offset = get<double>(in, path);
  model.platt_a = get<double>(in, path);
  model.platt_b = get<double>(in, path);
  model.spec_fingerprint = get<std::uint64_t>(in, path);
  const auto config_len = get<std::uint64_t>(in, path);
  model.config_json.resize(config_len);
  in.read(model.config_json.data(), static_cast<std::streamsize>(config_len));
  if (!in) throw data_error("truncated model file: " + path);
  model.mean = get_vector(in, path);
  model.stddev = get_vector(in, path);
  model.coeffs = get_vector(in, path);
  const auto rows = get<std::uint64_t>(in, path);
  const auto cols = get<std::uint64_t>(in, path);
  if (rows != static_cast<std::uint64_t>(model.coeffs.size()) ||
      cols != static_cast<std::uint64_t>(model.mean.size())) {
    throw data_error("model file shape mismatch: " + path);
  }
  model.support_vectors.resize(static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < model.support_vectors.rows(); ++i) {
    for (Eigen::Index j = 0; j < model.support_vectors.cols(); ++j) {
      model.support_vectors(i, j) = get<double>(in, path);
    }
  }
  return model;
}

}  // namespace tuplesim
