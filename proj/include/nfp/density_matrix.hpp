#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nfp {

using ComplexMatrix = Eigen::MatrixXcd;

/**
 * Mixed state of an n-qubit register as a dense 2^n x 2^n matrix.
 *
 * Basis ordering is big-endian by qubit index: qubit 0 is the most
 * significant bit of a basis-state index. Local operators passed to
 * apply_local() follow the same convention over their own operand list.
 */
class DensityMatrix {
 public:
  /// |0...0><0...0| on n qubits.
  explicit DensityMatrix(std::size_t n_qubits);
  DensityMatrix(std::size_t n_qubits, ComplexMatrix rho);

  /// |b><b| for computational basis state index b.
  static DensityMatrix basis_state(std::size_t n_qubits, std::size_t index);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const ComplexMatrix& matrix() const { return rho_; }

  /// rho -> U rho U^dagger with U acting on `qubits`.
  void apply_unitary(const ComplexMatrix& op, std::span<const std::size_t> qubits);

  /// rho -> sum_k K rho K^dagger with every K acting on `qubits`. Does not
  /// check completeness; see apply_channel() for the validated entry point.
  void apply_kraus(std::span<const ComplexMatrix> kraus,
                   std::span<const std::size_t> qubits);

  double trace() const;
  /// max |rho - rho^dagger|.
  double hermiticity_error() const;
  double min_eigenvalue() const;

  /// Diagonal of rho (real part), i.e. computational-basis probabilities.
  std::vector<double> diagonal() const;

 private:
  std::size_t n_qubits_;
  ComplexMatrix rho_;
};

/// op * rho * op^dagger with op acting on `qubits` of an n-qubit matrix.
ComplexMatrix conjugate_local(const ComplexMatrix& rho, std::size_t n_qubits,
                              const ComplexMatrix& op,
                              std::span<const std::size_t> qubits);

}  // namespace nfp
