#include "nfp/density_matrix.hpp"

#include <Eigen/Eigenvalues>
#include <string>

#include "nfp/error.hpp"

namespace nfp {

namespace {

struct LocalLayout {
  std::vector<std::size_t> offsets;  // full-index offset of each local index
  std::vector<std::size_t> bases;    // full indices with all operand bits clear
};

LocalLayout make_layout(std::size_t n_qubits, std::span<const std::size_t> qubits) {
  const std::size_t k = qubits.size();
  std::size_t mask = 0;
  std::vector<std::size_t> bit(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (qubits[i] >= n_qubits) {
      throw InvalidArgument("operand q" + std::to_string(qubits[i]) + " outside a " +
                            std::to_string(n_qubits) + "-qubit state");
    }
    bit[i] = std::size_t{1} << (n_qubits - 1 - qubits[i]);
    if (mask & bit[i]) throw InvalidArgument("repeated operand qubit");
    mask |= bit[i];
  }
  LocalLayout layout;
  layout.offsets.resize(std::size_t{1} << k);
  for (std::size_t l = 0; l < layout.offsets.size(); ++l) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (l & (std::size_t{1} << (k - 1 - i))) off |= bit[i];
    }
    layout.offsets[l] = off;
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  for (std::size_t b = 0; b < dim; ++b) {
    if ((b & mask) == 0) layout.bases.push_back(b);
  }
  return layout;
}

}  // namespace

ComplexMatrix conjugate_local(const ComplexMatrix& rho, std::size_t n_qubits,
                              const ComplexMatrix& op,
                              std::span<const std::size_t> qubits) {
  const std::size_t local = std::size_t{1} << qubits.size();
  if (static_cast<std::size_t>(op.rows()) != local ||
      static_cast<std::size_t>(op.cols()) != local) {
    throw InvalidArgument("operator size does not match its operand count");
  }
  if (static_cast<std::size_t>(rho.rows()) != (std::size_t{1} << n_qubits)) {
    throw InvalidArgument("state dimension does not match qubit count");
  }
  const auto layout = make_layout(n_qubits, qubits);
  const auto dim = rho.rows();

  // Left multiplication acts on row indices, one column at a time.
  ComplexMatrix tmp(dim, dim);
  Eigen::VectorXcd in(static_cast<Eigen::Index>(local));
  Eigen::VectorXcd out(static_cast<Eigen::Index>(local));
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (auto b : layout.bases) {
      for (std::size_t l = 0; l < local; ++l) {
        in[static_cast<Eigen::Index>(l)] = rho(static_cast<Eigen::Index>(b | layout.offsets[l]), c);
      }
      out.noalias() = op * in;
      for (std::size_t l = 0; l < local; ++l) {
        tmp(static_cast<Eigen::Index>(b | layout.offsets[l]), c) = out[static_cast<Eigen::Index>(l)];
      }
    }
  }
  // Right multiplication by op^dagger acts on column indices.
  const ComplexMatrix op_conj = op.conjugate();
  ComplexMatrix result(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (auto b : layout.bases) {
      for (std::size_t l = 0; l < local; ++l) {
        in[static_cast<Eigen::Index>(l)] = tmp(r, static_cast<Eigen::Index>(b | layout.offsets[l]));
      }
      out.noalias() = op_conj * in;
      for (std::size_t l = 0; l < local; ++l) {
        result(r, static_cast<Eigen::Index>(b | layout.offsets[l])) = out[static_cast<Eigen::Index>(l)];
      }
    }
  }
  return result;
}

DensityMatrix::DensityMatrix(std::size_t n_qubits) : DensityMatrix(basis_state(n_qubits, 0)) {}

DensityMatrix::DensityMatrix(std::size_t n_qubits, ComplexMatrix rho)
    : n_qubits_(n_qubits), rho_(std::move(rho)) {
  const auto dim = std::size_t{1} << n_qubits_;
  if (static_cast<std::size_t>(rho_.rows()) != dim ||
      static_cast<std::size_t>(rho_.cols()) != dim) {
    throw InvalidArgument("density matrix must be " + std::to_string(dim) + "x" +
                          std::to_string(dim));
  }
}

DensityMatrix DensityMatrix::basis_state(std::size_t n_qubits, std::size_t index) {
  if (n_qubits == 0 || n_qubits > 16) throw InvalidArgument("unsupported qubit count");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  if (static_cast<Eigen::Index>(index) >= dim) throw InvalidArgument("basis index out of range");
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  rho(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityMatrix(n_qubits, std::move(rho));
}

void DensityMatrix::apply_unitary(const ComplexMatrix& op,
                                  std::span<const std::size_t> qubits) {
  rho_ = conjugate_local(rho_, n_qubits_, op, qubits);
}

void DensityMatrix::apply_kraus(std::span<const ComplexMatrix> kraus,
                                std::span<const std::size_t> qubits) {
  if (kraus.empty()) throw InvalidArgument("empty Kraus set");
  ComplexMatrix sum = conjugate_local(rho_, n_qubits_, kraus[0], qubits);
  for (std::size_t k = 1; k < kraus.size(); ++k) {
    sum += conjugate_local(rho_, n_qubits_, kraus[k], qubits);
  }
  rho_ = std::move(sum);
}

double DensityMatrix::trace() const { return rho_.trace().real(); }

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  // Symmetrize so the self-adjoint solver sees an exactly Hermitian input.
  const ComplexMatrix h = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::vector<double> DensityMatrix::diagonal() const {
  std::vector<double> d(dim());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = rho_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  return d;
}

}  // namespace nfp
