// Independent re-derivations used to cross-check the classifier: the kernel
// goes through std::pow and the QP solver enumerates active sets instead of
// iterating. Shared between the unit tests and the release gate.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tuplesim/linalg.hpp"
#include "tuplesim/util.hpp"

namespace qporacle {

using tuplesim::Matrix;
using tuplesim::Rng;
using tuplesim::Vector;

inline double oracle_kernel(const Vector& x, const Vector& y, double offset) {
  const double kxy = std::pow(x.dot(y) + offset, 3.0);
  const double kxx = std::pow(x.dot(x) + offset, 3.0);
  const double kyy = std::pow(y.dot(y) + offset, 3.0);
  return kxy / std::sqrt(kxx * kyy);
}

inline Matrix oracle_gram(const Matrix& x, double offset) {
  const Eigen::Index n = x.rows();
  Matrix k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k(i, j) = oracle_kernel(x.row(i).transpose(), x.row(j).transpose(), offset);
    }
  }
  return k;
}

struct QpSolution {
  Vector alpha;
  double bias = 0.0;
  double objective = -std::numeric_limits<double>::infinity();
  bool found = false;
};

// Decision-function bias under the same convention the solver uses: average
// of y_i - sum_j alpha_j y_j K_ij over free vectors, else the KKT midpoint.
inline double bias_for(const Vector& alpha, const Matrix& khat,
                       const std::vector<int>& labels, double c) {
  const Eigen::Index n = alpha.size();
  double free_sum = 0.0;
  int n_free = 0;
  double m_up = -std::numeric_limits<double>::infinity();
  double m_down = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double yi = labels[static_cast<std::size_t>(i)];
    double fi = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      fi += alpha(j) * labels[static_cast<std::size_t>(j)] * khat(i, j);
    }
    const double v = yi - fi;
    if (alpha(i) > 0.0 && alpha(i) < c) {
      free_sum += v;
      ++n_free;
    }
    if ((yi > 0.0 && alpha(i) < c) || (yi < 0.0 && alpha(i) > 0.0)) {
      m_up = std::max(m_up, v);
    }
    if ((yi > 0.0 && alpha(i) > 0.0) || (yi < 0.0 && alpha(i) < c)) {
      m_down = std::min(m_down, v);
    }
  }
  if (n_free > 0) return free_sum / n_free;
  if (std::isfinite(m_up) && std::isfinite(m_down)) return 0.5 * (m_up + m_down);
  return 0.0;
}

// Global optimum of max e'a - 1/2 a'Qa s.t. 0 <= a <= C, y'a = 0, found by
// trying every {0, C, free} assignment and solving the KKT system on the
// free block. The true optimum's active set is among the 3^n candidates and
// all candidates kept are feasible, so the best one is the optimum.
inline QpSolution exhaustive_qp(const Matrix& khat, const std::vector<int>& labels,
                                double c) {
  const Eigen::Index n = khat.rows();
  Matrix q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      q(i, j) = labels[static_cast<std::size_t>(i)] *
                labels[static_cast<std::size_t>(j)] * khat(i, j);
    }
  }

  long total = 1;
  for (Eigen::Index i = 0; i < n; ++i) total *= 3;

  QpSolution best;
  for (long code = 0; code < total; ++code) {
    long rem = code;
    std::vector<Eigen::Index> free_idx;
    std::vector<Eigen::Index> cap_idx;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int state = static_cast<int>(rem % 3);
      rem /= 3;
      if (state == 1) cap_idx.push_back(i);
      if (state == 2) free_idx.push_back(i);
    }

    Vector alpha = Vector::Zero(n);
    for (const Eigen::Index i : cap_idx) alpha(i) = c;

    if (!free_idx.empty()) {
      const auto f = static_cast<Eigen::Index>(free_idx.size());
      Matrix sys = Matrix::Zero(f + 1, f + 1);
      Vector rhs(f + 1);
      for (Eigen::Index a = 0; a < f; ++a) {
        for (Eigen::Index b = 0; b < f; ++b) sys(a, b) = q(free_idx[a], free_idx[b]);
        const double ya = labels[static_cast<std::size_t>(free_idx[a])];
        sys(a, f) = ya;
        sys(f, a) = ya;
        double bound_dot = 0.0;
        for (const Eigen::Index i : cap_idx) bound_dot += q(free_idx[a], i) * c;
        rhs(a) = 1.0 - bound_dot;
      }
      double bound_y = 0.0;
      for (const Eigen::Index i : cap_idx) {
        bound_y += labels[static_cast<std::size_t>(i)] * c;
      }
      rhs(f) = -bound_y;

      const Vector sol = Eigen::FullPivLU<Matrix>(sys).solve(rhs);
      if ((sys * sol - rhs).cwiseAbs().maxCoeff() > 1e-8) continue;  // singular face
      bool feasible = true;
      for (Eigen::Index a = 0; a < f; ++a) {
        if (sol(a) < -1e-9 || sol(a) > c + 1e-9) feasible = false;
      }
      if (!feasible) continue;
      for (Eigen::Index a = 0; a < f; ++a) alpha(free_idx[a]) = sol(a);
    } else {
      double sum_y = 0.0;
      for (const Eigen::Index i : cap_idx) {
        sum_y += labels[static_cast<std::size_t>(i)] * c;
      }
      if (std::abs(sum_y) > 1e-12) continue;  // violates the equality constraint
    }

    const double obj = alpha.sum() - 0.5 * alpha.dot(q * alpha);
    if (obj > best.objective) {
      best.alpha = alpha;
      best.objective = obj;
      best.found = true;
    }
  }
  if (best.found) best.bias = bias_for(best.alpha, khat, labels, c);
  return best;
}

struct Instance {
  Matrix x;
  std::vector<int> labels;
  double c = 1.0;
};

inline Instance random_instance(Rng& rng) {
  Instance inst;
  const auto n = static_cast<Eigen::Index>(2 + rng.index(7));   // 2..8 points
  const auto d = static_cast<Eigen::Index>(1 + rng.index(4));   // 1..4 dims
  inst.x.resize(n, d);
  for (Eigen::Index i = 0; i < inst.x.size(); ++i) {
    inst.x(i) = 2.0 * rng.uniform() - 1.0;
  }
  inst.labels.resize(static_cast<std::size_t>(n));
  for (auto& y : inst.labels) y = rng.uniform() < 0.5 ? -1 : 1;
  inst.labels[0] = 1;  // both classes must appear
  inst.labels[1] = -1;
  const double cs[] = {0.5, 1.0, 2.0};
  inst.c = cs[rng.index(3)];
  return inst;
}

}  // namespace qporacle
