#include "nfp/simulator.hpp"

#include <algorithm>
#include <complex>
#include <numeric>

#include "nfp/channels.hpp"
#include "nfp/error.hpp"

namespace nfp {

double OutcomeDistribution::sum() const {
  return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

std::string outcome_label(std::size_t outcome, std::size_t n_bits) {
  std::string s(n_bits, '0');
  for (std::size_t i = 0; i < n_bits; ++i) {
    if (outcome & (std::size_t{1} << (n_bits - 1 - i))) s[i] = '1';
  }
  return s;
}

std::size_t outcome_index(const std::string& label) {
  if (label.empty() || label.size() > 16) throw InvalidArgument("bad outcome label '" + label + "'");
  std::size_t idx = 0;
  for (char c : label) {
    if (c != '0' && c != '1') throw InvalidArgument("bad outcome label '" + label + "'");
    idx = (idx << 1) | static_cast<std::size_t>(c - '0');
  }
  return idx;
}

DensityMatrix evolve(const Circuit& circuit, const NoiseModel& noise, double t_hours) {
  if (circuit.n_qubits() > kMaxDensityQubits) {
    throw InvalidArgument("density-matrix simulation supports at most 12 qubits");
  }
  if (!(t_hours >= 0.0)) throw InvalidArgument("time must be non-negative");

  std::vector<QubitNoise> params;
  for (std::size_t q = 0; q < circuit.n_qubits(); ++q) params.push_back(noise.at(q, t_hours));

  DensityMatrix rho(circuit.n_qubits());
  for (const auto& gate : circuit.gates()) {
    rho.apply_unitary(gate_unitary(gate.kind()), gate.qubits());
    const bool single = gate.qubits().size() == 1;
    for (auto q : gate.qubits()) {
      const std::size_t operand[] = {q};
      const auto& p = params[q];
      const double depol = single ? p.p1 : p.p2;
      // A zero parameter is the identity channel; skipping it is exact.
      if (depol > 0.0) rho.apply_kraus(depolarizing(depol), operand);
      if (p.gamma > 0.0) rho.apply_kraus(amplitude_damping(p.gamma), operand);
      if (p.lambda > 0.0) rho.apply_kraus(phase_damping(p.lambda), operand);
    }
  }
  return rho;
}

OutcomeDistribution measured_marginal(const DensityMatrix& rho,
                                      const std::vector<std::size_t>& measured) {
  const auto n = rho.n_qubits();
  OutcomeDistribution dist;
  dist.n_bits = measured.size();
  dist.probabilities.assign(std::size_t{1} << measured.size(), 0.0);
  const auto diag = rho.diagonal();
  for (std::size_t b = 0; b < diag.size(); ++b) {
    std::size_t outcome = 0;
    for (auto q : measured) outcome = (outcome << 1) | ((b >> (n - 1 - q)) & 1U);
    dist.probabilities[outcome] += std::max(diag[b], 0.0);
  }
  return dist;
}

OutcomeDistribution apply_readout(const OutcomeDistribution& dist,
                                  const std::vector<std::size_t>& measured,
                                  const NoiseModel& noise, double t_hours) {
  if (measured.size() != dist.n_bits) throw InvalidArgument("measured qubits / outcome width mismatch");
  OutcomeDistribution out = dist;
  // Confusion acts independently per bit, so fold it in one bit at a time.
  for (std::size_t i = 0; i < measured.size(); ++i) {
    const auto q = noise.at(measured[i], t_hours);
    if (q.e01 == 0.0 && q.e10 == 0.0) continue;
    const std::size_t bit = std::size_t{1} << (dist.n_bits - 1 - i);
    for (std::size_t o = 0; o < out.size(); ++o) {
      if (o & bit) continue;
      const double p0 = out.probabilities[o];
      const double p1 = out.probabilities[o | bit];
      out.probabilities[o] = p0 * (1.0 - q.e01) + p1 * q.e10;
      out.probabilities[o | bit] = p0 * q.e01 + p1 * (1.0 - q.e10);
    }
  }
  return out;
}

OutcomeDistribution exact_distribution(const Circuit& circuit, const NoiseModel& noise,
                                       double t_hours) {
  const auto rho = evolve(circuit, noise, t_hours);
  return apply_readout(measured_marginal(rho, circuit.measured()), circuit.measured(), noise,
                       t_hours);
}

OutcomeDistribution ideal_distribution(const Circuit& circuit) {
  const auto n = circuit.n_qubits();
  if (n > kMaxStatevectorQubits) throw InvalidArgument("statevector simulation supports at most 24 qubits");
  using cd = std::complex<double>;
  std::vector<cd> psi(std::size_t{1} << n, cd{0.0});
  psi[0] = 1.0;
  auto mask_of = [n](std::size_t q) { return std::size_t{1} << (n - 1 - q); };
  const double s = 1.0 / std::sqrt(2.0);

  for (const auto& g : circuit.gates()) {
    const auto t = mask_of(g.target());
    if (g.kind() == GateKind::Hadamard) {
      for (std::size_t b = 0; b < psi.size(); ++b) {
        if (b & t) continue;
        const cd a0 = psi[b];
        const cd a1 = psi[b | t];
        psi[b] = s * (a0 + a1);
        psi[b | t] = s * (a0 - a1);
      }
      continue;
    }
    // X, CNOT and Toffoli flip the target when every control is set.
    std::size_t controls = 0;
    for (std::size_t i = 0; i + 1 < g.qubits().size(); ++i) controls |= mask_of(g.qubits()[i]);
    for (std::size_t b = 0; b < psi.size(); ++b) {
      if ((b & t) == 0 && (b & controls) == controls) std::swap(psi[b], psi[b | t]);
    }
  }

  OutcomeDistribution dist;
  dist.n_bits = circuit.measured().size();
  dist.probabilities.assign(std::size_t{1} << dist.n_bits, 0.0);
  for (std::size_t b = 0; b < psi.size(); ++b) {
    std::size_t outcome = 0;
    for (auto q : circuit.measured()) outcome = (outcome << 1) | ((b & mask_of(q)) ? 1U : 0U);
    dist.probabilities[outcome] += std::norm(psi[b]);
  }
  return dist;
}

}  // namespace nfp
