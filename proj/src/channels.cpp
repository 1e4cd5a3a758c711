#include "nfp/channels.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "nfp/error.hpp"

namespace nfp {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument(std::string(name) + " must lie in [0, 1], got " + std::to_string(p));
  }
}

ComplexMatrix mat2(std::complex<double> a, std::complex<double> b,
                   std::complex<double> c, std::complex<double> d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

ComplexMatrix controlled_x(std::size_t n_controls) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << (n_controls + 1));
  ComplexMatrix m = ComplexMatrix::Identity(dim, dim);
  // The last two basis states have every control set; swap them.
  m(dim - 2, dim - 2) = 0.0;
  m(dim - 1, dim - 1) = 0.0;
  m(dim - 2, dim - 1) = 1.0;
  m(dim - 1, dim - 2) = 1.0;
  return m;
}

}  // namespace

ComplexMatrix gate_unitary(GateKind kind) {
  switch (kind) {
    case GateKind::Hadamard: {
      const double s = 1.0 / std::sqrt(2.0);
      return mat2(s, s, s, -s);
    }
    case GateKind::PauliX: return mat2(0, 1, 1, 0);
    case GateKind::CNOT: return controlled_x(1);
    case GateKind::Toffoli: return controlled_x(2);
  }
  throw InvalidArgument("unknown gate kind");
}

KrausSet depolarizing(double p) {
  check_probability(p, "depolarizing probability");
  const std::complex<double> i(0.0, 1.0);
  const double a = std::sqrt(1.0 - 0.75 * p);
  const double b = std::sqrt(0.25 * p);
  return {mat2(a, 0, 0, a), mat2(0, b, b, 0), mat2(0, -i * b, i * b, 0), mat2(b, 0, 0, -b)};
}

KrausSet amplitude_damping(double gamma) {
  check_probability(gamma, "amplitude damping gamma");
  return {mat2(1, 0, 0, std::sqrt(1.0 - gamma)), mat2(0, std::sqrt(gamma), 0, 0)};
}

KrausSet phase_damping(double lambda) {
  check_probability(lambda, "phase damping lambda");
  return {mat2(1, 0, 0, std::sqrt(1.0 - lambda)), mat2(0, 0, 0, std::sqrt(lambda))};
}

double completeness_error(std::span<const ComplexMatrix> kraus) {
  if (kraus.empty()) return 1.0;
  const auto dim = kraus[0].rows();
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto& k : kraus) {
    if (k.rows() != dim || k.cols() != dim) {
      throw InvalidArgument("Kraus operators must share one square shape");
    }
    sum += k.adjoint() * k;
  }
  return (sum - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

DensityMatrix apply_gate(const DensityMatrix& rho, const Gate& gate) {
  DensityMatrix out = rho;
  out.apply_unitary(gate_unitary(gate.kind()), gate.qubits());
  return out;
}

DensityMatrix apply_channel(const DensityMatrix& rho, std::span<const ComplexMatrix> kraus,
                            std::span<const std::size_t> qubits) {
  const double err = completeness_error(kraus);
  if (!(err < kKrausTolerance)) {
    throw InvalidArgument("Kraus set is not trace preserving (completeness error " +
                          std::to_string(err) + ")");
  }
  DensityMatrix out = rho;
  out.apply_kraus(kraus, qubits);
  return out;
}

}  // namespace nfp
