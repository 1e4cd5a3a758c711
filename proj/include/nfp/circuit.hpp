#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace nfp {

enum class GateKind { Hadamard, PauliX, CNOT, Toffoli };

std::string_view to_string(GateKind kind);
GateKind gate_kind_from_string(std::string_view name);

/// Number of operand qubits a gate of this kind acts on.
std::size_t arity(GateKind kind);

/**
 * A single gate. Operands are stored controls first, target last:
 * H/X: {target}, CNOT: {control, target}, Toffoli: {c0, c1, target}.
 */
class Gate {
 public:
  Gate(GateKind kind, std::vector<std::size_t> qubits);

  static Gate h(std::size_t target) { return {GateKind::Hadamard, {target}}; }
  static Gate x(std::size_t target) { return {GateKind::PauliX, {target}}; }
  static Gate cnot(std::size_t control, std::size_t target) {
    return {GateKind::CNOT, {control, target}};
  }
  static Gate toffoli(std::size_t c0, std::size_t c1, std::size_t target) {
    return {GateKind::Toffoli, {c0, c1, target}};
  }

  GateKind kind() const { return kind_; }
  const std::vector<std::size_t>& qubits() const { return qubits_; }
  std::size_t target() const { return qubits_.back(); }

  friend bool operator==(const Gate&, const Gate&) = default;

 private:
  GateKind kind_;
  std::vector<std::size_t> qubits_;
};

/// Immutable gate list over a fixed register, measured at the end.
class Circuit {
 public:
  Circuit(std::size_t n_qubits, std::vector<Gate> gates,
          std::vector<std::size_t> measured);

  std::size_t n_qubits() const { return n_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<std::size_t>& measured() const { return measured_; }
  std::size_t size() const { return gates_.size(); }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::size_t n_qubits_;
  std::vector<Gate> gates_;
  std::vector<std::size_t> measured_;
};

/// Gate-count prefixes, one per measurement step.
struct StepPlan {
  std::vector<std::size_t> cut_points;

  std::size_t steps() const { return cut_points.size(); }
  friend bool operator==(const StepPlan&, const StepPlan&) = default;
};

inline constexpr std::size_t kTestbedQubits = 4;
inline constexpr std::size_t kGatesPerRepetition = 7;
inline constexpr std::size_t kStepsPerRepetition = 3;

/**
 * The 4-qubit fingerprinting circuit: each repetition appends
 * H(0) H(1) CNOT(0,2) CNOT(1,3) X(0) X(1) Toffoli(0,1,2); qubits 2 and 3
 * are measured.
 */
Circuit build_testbed(std::size_t repetitions);

/// Cut points 7r+3, 7r+5, 7r+7 for every repetition r.
StepPlan step_plan(std::size_t repetitions);

/// First `cut` gates of `circuit`, same register and measured qubits.
Circuit prefix(const Circuit& circuit, std::size_t cut);

/// All step prefixes of the testbed circuit, in step order.
std::vector<Circuit> testbed_steps(std::size_t repetitions);

nlohmann::json to_json(const Circuit& circuit);
Circuit circuit_from_json(const nlohmann::json& j);

/// One line per gate, e.g. "  3: CNOT q1 -> q3".
std::string to_text(const Circuit& circuit);

}  // namespace nfp
