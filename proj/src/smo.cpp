#include "nfp/smo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nfp/error.hpp"

namespace nfp {

namespace {

class SmoSolver {
 public:
  SmoSolver(const Eigen::MatrixXd& k, const std::vector<int>& y, const SmoParams& p)
      : k_(k), y_(y), p_(p), m_(y.size()), alpha_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_))),
        g_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_))) {
    max_updates_ = p_.max_updates != 0 ? p_.max_updates : 2000 * m_;
  }

  SmoSolution run() {
    SmoSolution sol;
    bool budget_hit = false;
    bool settled = false;
    // The loop tests KKT against the running threshold; the reported bias is
    // averaged afterwards, so re-examine against it until both agree.
    while (!budget_hit && !settled) {
      const std::size_t before = updates_;
      budget_hit = platt_loop(sol);
      if (budget_hit) break;
      const double b = bias_from_alpha(k_, y_, alpha_, p_.C);
      if (kkt_violation(k_, y_, alpha_, b, p_.C) <= p_.tol) {
        settled = true;
      } else if (updates_ == before && b_ == b) {
        break;  // no pair step makes progress
      } else {
        b_ = b;
      }
    }
    sol.converged = settled;
    sol.updates = updates_;
    sol.alpha = alpha_;
    sol.bias = bias_from_alpha(k_, y_, alpha_, p_.C);
    sol.objective = dual_objective(k_, y_, alpha_);
    return sol;
  }

 private:
  // Returns true when a sweep or update budget ran out.
  bool platt_loop(SmoSolution& sol) {
    bool examine_all = true;
    std::size_t changed = 0;
    bool budget_hit = false;
    while (changed > 0 || examine_all) {
      changed = 0;
      if (examine_all) {
        if (sol.sweeps == p_.max_passes) {
          budget_hit = true;
          break;
        }
        ++sol.sweeps;
        for (std::size_t i = 0; i < m_ && !out_of_budget(); ++i) changed += examine(i);
      } else {
        for (std::size_t i = 0; i < m_ && !out_of_budget(); ++i) {
          if (free(i)) changed += examine(i);
        }
      }
      if (out_of_budget()) {
        budget_hit = true;
        break;
      }
      if (examine_all) {
        examine_all = false;
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    return budget_hit;
  }

  bool out_of_budget() const { return updates_ >= max_updates_; }
  bool free(std::size_t i) const { return alpha_[idx(i)] > 0.0 && alpha_[idx(i)] < p_.C; }
  static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }
  double error(std::size_t i) const { return g_[idx(i)] + b_ - y_[i]; }

  std::size_t examine(std::size_t i2) {
    const double r2 = error(i2) * y_[i2];
    const double a2 = alpha_[idx(i2)];
    if (!((r2 < -p_.tol && a2 < p_.C) || (r2 > p_.tol && a2 > 0.0))) return 0;

    // Second choice: largest |E1 - E2| among free multipliers.
    const double e2 = error(i2);
    std::size_t best = m_;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == i2 || !free(i)) continue;
      const double gap = std::abs(error(i) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < m_ && step(best, i2)) return 1;
    for (std::size_t off = 1; off < m_; ++off) {
      const auto i1 = (i2 + off) % m_;
      if (free(i1) && step(i1, i2)) return 1;
    }
    for (std::size_t off = 1; off < m_; ++off) {
      const auto i1 = (i2 + off) % m_;
      if (!free(i1) && step(i1, i2)) return 1;
    }
    return 0;
  }

  bool step(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double C = p_.C;
    const double a1 = alpha_[idx(i1)];
    const double a2 = alpha_[idx(i2)];
    const int y1 = y_[i1];
    const int y2 = y_[i2];
    const int s = y1 * y2;
    const double lo = s < 0 ? std::max(0.0, a2 - a1) : std::max(0.0, a1 + a2 - C);
    const double hi = s < 0 ? std::min(C, C + a2 - a1) : std::min(C, a1 + a2);
    if (!(hi > lo)) return false;

    const double k11 = k_(idx(i1), idx(i1));
    const double k12 = k_(idx(i1), idx(i2));
    const double k22 = k_(idx(i2), idx(i2));
    const double eta = k11 + k22 - 2.0 * k12;
    const double slope = y2 * (error(i1) - error(i2));
    // Dual gain of moving a2 by t along the constraint line.
    auto gain = [&](double t) { return t * slope - 0.5 * eta * t * t; };

    double new_a2;
    if (eta > 0.0) {
      new_a2 = std::clamp(a2 + slope / eta, lo, hi);
    } else {
      const double g_lo = gain(lo - a2);
      const double g_hi = gain(hi - a2);
      if (g_lo > g_hi + p_.eps) {
        new_a2 = lo;
      } else if (g_hi > g_lo + p_.eps) {
        new_a2 = hi;
      } else {
        return false;
      }
    }
    new_a2 = snap(new_a2);
    if (std::abs(new_a2 - a2) < p_.eps * (new_a2 + a2 + p_.eps)) return false;
    if (!(gain(new_a2 - a2) > 0.0)) return false;
    const double new_a1 = snap(a1 + s * (a2 - new_a2));

    const double d1 = y1 * (new_a1 - a1);
    const double d2 = y2 * (new_a2 - a2);
    const double b1 = b_ - error(i1) - d1 * k11 - d2 * k12;
    const double b2 = b_ - error(i2) - d1 * k12 - d2 * k22;
    if (new_a1 > 0.0 && new_a1 < C) {
      b_ = b1;
    } else if (new_a2 > 0.0 && new_a2 < C) {
      b_ = b2;
    } else {
      b_ = 0.5 * (b1 + b2);
    }
    g_ += d1 * k_.col(idx(i1)) + d2 * k_.col(idx(i2));
    alpha_[idx(i1)] = new_a1;
    alpha_[idx(i2)] = new_a2;
    ++updates_;
    return true;
  }

  double snap(double a) const {
    const double slack = 1e-12 * p_.C;
    if (a < slack) return 0.0;
    if (a > p_.C - slack) return p_.C;
    return a;
  }

  const Eigen::MatrixXd& k_;
  const std::vector<int>& y_;
  SmoParams p_;
  std::size_t m_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd g_;  // g_i = sum_j alpha_j y_j K_ij
  double b_ = 0.0;
  std::size_t updates_ = 0;
  std::size_t max_updates_ = 0;
};

Eigen::VectorXd signed_alpha(const std::vector<int>& y, const Eigen::VectorXd& alpha) {
  Eigen::VectorXd v(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) v[i] = alpha[i] * y[static_cast<std::size_t>(i)];
  return v;
}

void check_problem(const Eigen::MatrixXd& k, const std::vector<int>& y) {
  if (y.size() < 2) throw InvalidArgument("SVM training needs at least 2 points");
  if (k.rows() != k.cols() || static_cast<std::size_t>(k.rows()) != y.size()) {
    throw InvalidArgument("Gram matrix and label count disagree");
  }
  bool pos = false;
  bool neg = false;
  for (int v : y) {
    if (v == 1) {
      pos = true;
    } else if (v == -1) {
      neg = true;
    } else {
      throw InvalidArgument("binary labels must be +1 or -1");
    }
  }
  if (!pos || !neg) throw InvalidArgument("binary training needs both classes present");
}

}  // namespace

double dual_objective(const Eigen::MatrixXd& k, const std::vector<int>& y,
                      const Eigen::VectorXd& alpha) {
  const Eigen::VectorXd ya = signed_alpha(y, alpha);
  return alpha.sum() - 0.5 * ya.dot(k * ya);
}

double bias_from_alpha(const Eigen::MatrixXd& k, const std::vector<int>& y,
                       const Eigen::VectorXd& alpha, double C) {
  const Eigen::VectorXd g = k * signed_alpha(y, alpha);
  double sum = 0.0;
  std::size_t n_free = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double yi = y[static_cast<std::size_t>(i)];
    const double bi = yi - g[i];
    if (alpha[i] > 0.0 && alpha[i] < C) {
      sum += bi;
      ++n_free;
    } else if ((alpha[i] <= 0.0) == (yi > 0)) {
      lower = std::max(lower, bi);  // y f >= 1 at a=0 (y=+1), y f <= 1 at a=C (y=-1)
    } else {
      upper = std::min(upper, bi);
    }
  }
  if (n_free > 0) return sum / static_cast<double>(n_free);
  if (std::isinf(lower)) return upper;
  if (std::isinf(upper)) return lower;
  return 0.5 * (lower + upper);
}

double kkt_violation(const Eigen::MatrixXd& k, const std::vector<int>& y,
                     const Eigen::VectorXd& alpha, double bias, double C) {
  const Eigen::VectorXd g = k * signed_alpha(y, alpha);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double margin = y[static_cast<std::size_t>(i)] * (g[i] + bias) - 1.0;
    double v;
    if (alpha[i] <= 0.0) {
      v = std::max(0.0, -margin);
    } else if (alpha[i] >= C) {
      v = std::max(0.0, margin);
    } else {
      v = std::abs(margin);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

SmoSolution solve_smo(const Eigen::MatrixXd& gram, const std::vector<int>& y,
                      const SmoParams& params) {
  check_problem(gram, y);
  if (!(params.C > 0.0)) throw InvalidArgument("C must be > 0");
  if (!(params.tol > 0.0)) throw InvalidArgument("tol must be > 0");
  return SmoSolver(gram, y, params).run();
}

double BinaryModel::decision(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != support_vectors.cols()) throw InvalidArgument("feature dimension mismatch");
  double f = bias;
  for (Eigen::Index i = 0; i < support_vectors.rows(); ++i) {
    f += coef[i] * kernel(support_vectors.row(i).transpose(), x);
  }
  return f;
}

Eigen::VectorXd BinaryModel::decisions(const Eigen::MatrixXd& x) const {
  if (x.cols() != support_vectors.cols()) throw InvalidArgument("feature dimension mismatch");
  Eigen::VectorXd f = cross_kernel(x, support_vectors, kernel) * coef;
  f.array() += bias;
  return f;
}

BinaryModel train_binary(const Eigen::MatrixXd& x, const Eigen::MatrixXd& gram,
                         const std::vector<int>& y, const Kernel& kernel,
                         const SmoParams& params) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw InvalidArgument("feature rows and labels disagree");
  const auto sol = solve_smo(gram, y, params);
  BinaryModel model;
  model.kernel = kernel;
  model.bias = sol.bias;
  model.C = params.C;
  model.tol = params.tol;
  model.updates = sol.updates;
  model.converged = sol.converged;
  model.dual_objective = sol.objective;
  for (Eigen::Index i = 0; i < sol.alpha.size(); ++i) {
    if (sol.alpha[i] > 0.0) model.support_indices.push_back(static_cast<std::size_t>(i));
  }
  const auto n_sv = static_cast<Eigen::Index>(model.support_indices.size());
  model.support_vectors.resize(n_sv, x.cols());
  model.coef.resize(n_sv);
  for (Eigen::Index j = 0; j < n_sv; ++j) {
    const auto i = static_cast<Eigen::Index>(model.support_indices[static_cast<std::size_t>(j)]);
    model.support_vectors.row(j) = x.row(i);
    model.coef[j] = sol.alpha[i] * y[static_cast<std::size_t>(i)];
  }
  return model;
}

BinaryModel train_binary(const Eigen::MatrixXd& x, const std::vector<int>& y,
                         const Kernel& kernel, const SmoParams& params) {
  return train_binary(x, gram(x, kernel), y, kernel, params);
}

int predict(const BinaryModel& model, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return model.decision(x) >= 0.0 ? 1 : -1;
}

}  // namespace nfp
