#pragma once

#include <span>
#include <vector>

#include "nfp/circuit.hpp"
#include "nfp/density_matrix.hpp"

namespace nfp {

using KrausSet = std::vector<ComplexMatrix>;

/// Kraus completeness threshold: max |sum K^dagger K - I| must stay below it.
inline constexpr double kKrausTolerance = 1e-12;

/// Unitary of a gate kind over its own operands (controls first, target last).
ComplexMatrix gate_unitary(GateKind kind);

/// rho -> (1-p) rho + p I/2.
KrausSet depolarizing(double p);
/// Energy relaxation towards |0> with decay probability gamma.
KrausSet amplitude_damping(double gamma);
/// Loss of coherence without energy exchange, strength lambda.
KrausSet phase_damping(double lambda);

/// max |sum_k K_k^dagger K_k - I|.
double completeness_error(std::span<const ComplexMatrix> kraus);

/// rho' = U rho U^dagger for the gate's unitary at its operand qubits.
DensityMatrix apply_gate(const DensityMatrix& rho, const Gate& gate);

/// rho' = sum_k K rho K^dagger; rejects non-CPTP sets.
DensityMatrix apply_channel(const DensityMatrix& rho, std::span<const ComplexMatrix> kraus,
                            std::span<const std::size_t> qubits);

}  // namespace nfp
