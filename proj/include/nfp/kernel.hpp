#pragma once

#include <string>

#include <Eigen/Dense>
#include <json.hpp>

namespace nfp {

enum class KernelKind { Linear, Polynomial, Rbf };

/// k(x, y): x.y | (gamma x.y + offset)^degree | exp(-gamma |x - y|^2)
struct Kernel {
  KernelKind kind = KernelKind::Linear;
  int degree = 3;
  double gamma = 1.0;
  double offset = 1.0;

  static Kernel linear() { return {}; }
  static Kernel polynomial(int degree, double gamma, double offset);
  static Kernel rbf(double gamma);

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x,
                    const Eigen::Ref<const Eigen::VectorXd>& y) const;

  /// Short label, e.g. "linear", "poly2(g=0.0278,r=1)", "rbf(g=10)".
  std::string label() const;

  friend bool operator==(const Kernel&, const Kernel&) = default;
};

/// G(i, j) = k(row i, row j); exactly symmetric.
Eigen::MatrixXd gram(const Eigen::MatrixXd& x, const Kernel& kernel);

/// K(i, j) = k(a row i, b row j).
Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const Kernel& kernel);

nlohmann::json to_json(const Kernel& kernel);
Kernel kernel_from_json(const nlohmann::json& j);

}  // namespace nfp
