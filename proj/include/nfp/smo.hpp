#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "nfp/kernel.hpp"

namespace nfp {

struct SmoParams {
  double C = 1.0;
  double tol = 1e-3;            // KKT violation tolerance
  std::size_t max_passes = 100; // full sweeps over the training set
  std::size_t max_updates = 0;  // accepted pair updates; 0 = 2000 * m
  double eps = 1e-12;           // smallest alpha step considered progress
};

/// Dual solution over a training set.
struct SmoSolution {
  Eigen::VectorXd alpha;
  double bias = 0.0;
  double objective = 0.0;  // sum(alpha) - 1/2 alpha' Q alpha
  std::size_t updates = 0;
  std::size_t sweeps = 0;
  bool converged = false;
};

/**
 * Soft-margin SVM dual by sequential minimal optimization.
 *
 * Maximizes sum(a) - 1/2 sum_ij a_i a_j y_i y_j G_ij subject to
 * 0 <= a_i <= C and sum a_i y_i = 0. The outer loop alternates full sweeps
 * with sweeps over non-bound multipliers; for each KKT violator the partner
 * is the non-bound point maximizing |E1 - E2|, falling back to scans of
 * non-bound and then all points. Selection is deterministic. The returned
 * bias is the mean of y_i - g_i over free multipliers (midpoint of the
 * feasible interval when none are free).
 */
SmoSolution solve_smo(const Eigen::MatrixXd& gram, const std::vector<int>& y,
                      const SmoParams& params);

/// Dual objective of an arbitrary multiplier vector.
double dual_objective(const Eigen::MatrixXd& gram, const std::vector<int>& y,
                      const Eigen::VectorXd& alpha);

/// Bias from multipliers: mean over free ones, else midpoint of the KKT interval.
double bias_from_alpha(const Eigen::MatrixXd& gram, const std::vector<int>& y,
                       const Eigen::VectorXd& alpha, double C);

/// Largest KKT violation of (alpha, bias) in units of y f(x) - 1.
double kkt_violation(const Eigen::MatrixXd& gram, const std::vector<int>& y,
                     const Eigen::VectorXd& alpha, double bias, double C);

/// Trained binary classifier in dual form: f(x) = sum coef_i k(sv_i, x) + bias.
struct BinaryModel {
  Kernel kernel;
  Eigen::MatrixXd support_vectors;
  Eigen::VectorXd coef;  // alpha_i * y_i
  double bias = 0.0;
  std::vector<std::size_t> support_indices;  // rows of the training set
  double C = 1.0;
  double tol = 1e-3;
  std::size_t updates = 0;
  bool converged = false;
  double dual_objective = 0.0;

  double decision(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd decisions(const Eigen::MatrixXd& x) const;
};

/// Labels must be +1 / -1 with both present.
BinaryModel train_binary(const Eigen::MatrixXd& x, const std::vector<int>& y,
                         const Kernel& kernel, const SmoParams& params);
/// Same, reusing a precomputed Gram matrix of x.
BinaryModel train_binary(const Eigen::MatrixXd& x, const Eigen::MatrixXd& gram,
                         const std::vector<int>& y, const Kernel& kernel,
                         const SmoParams& params);

/// sign of the decision value; 0 maps to +1.
int predict(const BinaryModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace nfp
