// Reference computations used only by the tests. Nothing here calls into
// the library's solvers or simulators.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

namespace oracle {

/// Soft-margin dual solved by accelerated projected gradient.
struct DualSolution {
  Eigen::VectorXd alpha;
  double bias = 0.0;
  double objective = 0.0;
};

inline double dual_value(const Eigen::MatrixXd& q, const Eigen::VectorXd& a) {
  return a.sum() - 0.5 * a.dot(q * a);
}

// Projection onto {0 <= a <= C, y.a = 0}: a(nu) = clip(v - nu y) and y.a(nu)
// is non-increasing in nu, so bisect.
inline Eigen::VectorXd project(const Eigen::VectorXd& v, const Eigen::VectorXd& y, double c) {
  auto at = [&](double nu) {
    return (v - nu * y).cwiseMax(0.0).cwiseMin(c).eval();
  };
  double lo = -(v.cwiseAbs().maxCoeff() + c) - 1.0;
  double hi = -lo;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (y.dot(at(mid)) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return at(0.5 * (lo + hi));
}

inline DualSolution solve_dual(const Eigen::MatrixXd& gram, const std::vector<int>& labels,
                               double c) {
  const auto m = static_cast<Eigen::Index>(labels.size());
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) y(i) = labels[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd q = y.asDiagonal() * gram * y.asDiagonal();
  const double lip =
      std::max(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(q).eigenvalues().maxCoeff(), 1e-12);

  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd z = a;
  double t = 1.0;
  double best = dual_value(q, a);
  for (int it = 0; it < 400000; ++it) {
    const Eigen::VectorXd grad = Eigen::VectorXd::Ones(m) - q * z;
    const Eigen::VectorXd next = project(z + grad / lip, y, c);
    const double value = dual_value(q, next);
    if (value < best && t > 1.0) {
      // restart momentum
      z = a;
      t = 1.0;
      continue;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = next + ((t - 1.0) / tn) * (next - a);
    const double step = (next - a).cwiseAbs().maxCoeff();
    a = next;
    t = tn;
    best = value;
    if (step < 1e-15 * std::max(1.0, c)) break;
  }

  DualSolution out;
  out.alpha = a;
  out.objective = dual_value(q, a);

  // bias: average over free multipliers, else midpoint of the feasible range
  const Eigen::VectorXd g = gram * a.cwiseProduct(y);
  const double margin = 1e-7 * c;
  double sum = 0.0;
  int free = 0;
  double lo = -1e300, hi = 1e300;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double r = y(i) - g(i);
    if (a(i) > margin && a(i) < c - margin) {
      sum += r;
      ++free;
    } else if ((a(i) <= margin) == (y(i) > 0)) {
      lo = std::max(lo, r);
    } else {
      hi = std::min(hi, r);
    }
  }
  out.bias = free > 0 ? sum / free : 0.5 * (lo + hi);
  return out;
}

/// Shannon entropy in bits.
inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

inline std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = 0.5 * static_cast<double>(i + j);
    i = j + 1;
  }
  return r;
}

inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

/// Pearson chi-square statistic of a contingency table; all-zero columns are
/// dropped. Returns {statistic, degrees of freedom}.
inline std::pair<double, int> chi_square(const std::vector<std::vector<double>>& table) {
  const std::size_t rows = table.size();
  const std::size_t cols = table.front().size();
  std::vector<double> rsum(rows, 0.0), csum(cols, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      rsum[i] += table[i][j];
      csum[j] += table[i][j];
      total += table[i][j];
    }
  double stat = 0.0;
  int used = 0;
  for (std::size_t j = 0; j < cols; ++j) {
    if (csum[j] == 0.0) continue;
    ++used;
    for (std::size_t i = 0; i < rows; ++i) {
      const double e = rsum[i] * csum[j] / total;
      stat += (table[i][j] - e) * (table[i][j] - e) / e;
    }
  }
  return {stat, static_cast<int>(rows - 1) * (used - 1)};
}

/// Upper 0.001 critical values of chi-square for 1..6 degrees of freedom.
inline double chi_square_critical_999(int dof) {
  static const double table[] = {10.8276, 13.8155, 16.2662, 18.4668, 20.5150, 22.4577};
  return table[dof - 1];
}

}  // namespace oracle
