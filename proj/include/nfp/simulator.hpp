#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "nfp/circuit.hpp"
#include "nfp/density_matrix.hpp"
#include "nfp/noise_model.hpp"

namespace nfp {

/**
 * Probabilities of the 2^m outcomes of a sigma-z measurement of the m
 * measured qubits. Outcome index bits follow the measured-qubit order,
 * first measured qubit most significant: for the testbed the order is
 * "00", "01", "10", "11" with qubit 2's bit first.
 */
struct OutcomeDistribution {
  std::size_t n_bits = 0;
  std::vector<double> probabilities;

  std::size_t size() const { return probabilities.size(); }
  double operator[](std::size_t outcome) const { return probabilities[outcome]; }
  double sum() const;
};

/// Bitstring label of an outcome index, e.g. outcome_label(2, 2) == "10".
std::string outcome_label(std::size_t outcome, std::size_t n_bits);
/// Inverse of outcome_label(); throws InvalidArgument on a malformed label.
std::size_t outcome_index(const std::string& label);

inline constexpr std::size_t kMaxDensityQubits = 12;
inline constexpr std::size_t kMaxStatevectorQubits = 24;

/// Density matrix after every gate and its noise layer, at drift time t.
DensityMatrix evolve(const Circuit& circuit, const NoiseModel& noise, double t_hours = 0.0);

/// Born-rule marginal over the measured qubits, before readout error.
OutcomeDistribution measured_marginal(const DensityMatrix& rho,
                                      const std::vector<std::size_t>& measured);

/// Classical readout confusion for each measured qubit at time t.
OutcomeDistribution apply_readout(const OutcomeDistribution& dist,
                                  const std::vector<std::size_t>& measured,
                                  const NoiseModel& noise, double t_hours = 0.0);

/**
 * Exact outcome distribution of a circuit on a noisy device. Each gate is
 * followed by depolarizing (p1 for one-qubit gates, p2 otherwise),
 * amplitude damping and phase damping on its operand qubits; readout
 * confusion is applied to the final marginal.
 */
OutcomeDistribution exact_distribution(const Circuit& circuit, const NoiseModel& noise,
                                       double t_hours = 0.0);

/// Noiseless statevector simulation; independent of the density-matrix path.
OutcomeDistribution ideal_distribution(const Circuit& circuit);

}  // namespace nfp
