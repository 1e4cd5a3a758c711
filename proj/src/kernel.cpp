#include "nfp/kernel.hpp"

#include <cmath>
#include <cstdio>

#include "nfp/error.hpp"

namespace nfp {

Kernel Kernel::polynomial(int degree, double gamma, double offset) {
  if (degree < 1) throw InvalidArgument("polynomial degree must be >= 1");
  if (!(gamma > 0.0)) throw InvalidArgument("polynomial gamma must be > 0");
  if (!(offset >= 0.0)) throw InvalidArgument("polynomial offset must be >= 0");
  return {KernelKind::Polynomial, degree, gamma, offset};
}

Kernel Kernel::rbf(double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("RBF gamma must be > 0");
  return {KernelKind::Rbf, 3, gamma, 0.0};
}

double Kernel::operator()(const Eigen::Ref<const Eigen::VectorXd>& x,
                          const Eigen::Ref<const Eigen::VectorXd>& y) const {
  if (x.size() != y.size()) throw InvalidArgument("kernel arguments differ in dimension");
  switch (kind) {
    case KernelKind::Linear: return x.dot(y);
    case KernelKind::Polynomial: return std::pow(gamma * x.dot(y) + offset, degree);
    case KernelKind::Rbf: return std::exp(-gamma * (x - y).squaredNorm());
  }
  return 0.0;
}

std::string Kernel::label() const {
  char buf[96];
  switch (kind) {
    case KernelKind::Linear: return "linear";
    case KernelKind::Polynomial:
      std::snprintf(buf, sizeof buf, "poly%d(g=%.4g,r=%.4g)", degree, gamma, offset);
      return buf;
    case KernelKind::Rbf:
      std::snprintf(buf, sizeof buf, "rbf(g=%.4g)", gamma);
      return buf;
  }
  return "?";
}

namespace {

// Elementwise map of the inner-product matrix to kernel values.
void finish(Eigen::MatrixXd& k, const Eigen::VectorXd& na, const Eigen::VectorXd& nb,
            const Kernel& kernel) {
  switch (kernel.kind) {
    case KernelKind::Linear: break;
    case KernelKind::Polynomial:
      k = (kernel.gamma * k.array() + kernel.offset).pow(kernel.degree).matrix();
      break;
    case KernelKind::Rbf: {
      for (Eigen::Index j = 0; j < k.cols(); ++j) {
        for (Eigen::Index i = 0; i < k.rows(); ++i) {
          const double d2 = std::max(na[i] + nb[j] - 2.0 * k(i, j), 0.0);
          k(i, j) = std::exp(-kernel.gamma * d2);
        }
      }
      break;
    }
  }
}

}  // namespace

Eigen::MatrixXd gram(const Eigen::MatrixXd& x, const Kernel& kernel) {
  if (x.rows() == 0) throw InvalidArgument("gram of an empty set");
  Eigen::MatrixXd k = x * x.transpose();
  const Eigen::VectorXd norms = k.diagonal();
  finish(k, norms, norms, kernel);
  // Symmetrize exactly and pin k(x, x) = 1 for RBF.
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    if (kernel.kind == KernelKind::Rbf) k(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) k(j, i) = k(i, j);
  }
  return k;
}

Eigen::MatrixXd cross_kernel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const Kernel& kernel) {
  if (a.cols() != b.cols()) throw InvalidArgument("kernel arguments differ in dimension");
  Eigen::MatrixXd k = a * b.transpose();
  const Eigen::VectorXd na = a.rowwise().squaredNorm();
  const Eigen::VectorXd nb = b.rowwise().squaredNorm();
  finish(k, na, nb, kernel);
  return k;
}

nlohmann::json to_json(const Kernel& k) {
  switch (k.kind) {
    case KernelKind::Linear: return {{"kind", "linear"}};
    case KernelKind::Polynomial:
      return {{"kind", "poly"}, {"degree", k.degree}, {"gamma", k.gamma}, {"offset", k.offset}};
    case KernelKind::Rbf: return {{"kind", "rbf"}, {"gamma", k.gamma}};
  }
  return {};
}

Kernel kernel_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "linear") return Kernel::linear();
  if (kind == "poly") {
    return Kernel::polynomial(j.at("degree").get<int>(), j.at("gamma").get<double>(),
                              j.at("offset").get<double>());
  }
  if (kind == "rbf") return Kernel::rbf(j.at("gamma").get<double>());
  throw DataError("unknown kernel kind '" + kind + "'");
}

}  // namespace nfp
