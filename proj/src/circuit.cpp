#include "nfp/circuit.hpp"

#include <algorithm>
#include <sstream>

#include "nfp/error.hpp"

namespace nfp {

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::Hadamard: return "H";
    case GateKind::PauliX: return "X";
    case GateKind::CNOT: return "CNOT";
    case GateKind::Toffoli: return "Toffoli";
  }
  return "?";
}

GateKind gate_kind_from_string(std::string_view name) {
  if (name == "H") return GateKind::Hadamard;
  if (name == "X") return GateKind::PauliX;
  if (name == "CNOT") return GateKind::CNOT;
  if (name == "Toffoli") return GateKind::Toffoli;
  throw InvalidArgument("unknown gate kind '" + std::string(name) + "'");
}

std::size_t arity(GateKind kind) {
  switch (kind) {
    case GateKind::Hadamard:
    case GateKind::PauliX: return 1;
    case GateKind::CNOT: return 2;
    case GateKind::Toffoli: return 3;
  }
  return 0;
}

namespace {

bool all_distinct(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return std::adjacent_find(v.begin(), v.end()) == v.end();
}

}  // namespace

Gate::Gate(GateKind kind, std::vector<std::size_t> qubits)
    : kind_(kind), qubits_(std::move(qubits)) {
  if (qubits_.size() != arity(kind_)) {
    throw InvalidArgument(std::string(to_string(kind_)) + " expects " +
                          std::to_string(arity(kind_)) + " operand(s), got " +
                          std::to_string(qubits_.size()));
  }
  if (!all_distinct(qubits_)) {
    throw InvalidArgument("gate operands must be distinct qubits");
  }
}

Circuit::Circuit(std::size_t n_qubits, std::vector<Gate> gates,
                 std::vector<std::size_t> measured)
    : n_qubits_(n_qubits), gates_(std::move(gates)), measured_(std::move(measured)) {
  if (n_qubits_ == 0) throw InvalidArgument("circuit needs at least one qubit");
  for (const auto& g : gates_) {
    for (auto q : g.qubits()) {
      if (q >= n_qubits_) {
        throw InvalidArgument("gate operand q" + std::to_string(q) +
                              " outside a " + std::to_string(n_qubits_) +
                              "-qubit register");
      }
    }
  }
  for (auto q : measured_) {
    if (q >= n_qubits_) {
      throw InvalidArgument("measured qubit q" + std::to_string(q) + " out of range");
    }
  }
  if (!all_distinct(measured_)) throw InvalidArgument("measured qubits must be distinct");
}

Circuit build_testbed(std::size_t repetitions) {
  if (repetitions == 0) throw InvalidArgument("repetitions must be >= 1");
  std::vector<Gate> gates;
  gates.reserve(repetitions * kGatesPerRepetition);
  for (std::size_t r = 0; r < repetitions; ++r) {
    gates.push_back(Gate::h(0));
    gates.push_back(Gate::h(1));
    gates.push_back(Gate::cnot(0, 2));
    gates.push_back(Gate::cnot(1, 3));
    gates.push_back(Gate::x(0));
    gates.push_back(Gate::x(1));
    gates.push_back(Gate::toffoli(0, 1, 2));
  }
  return Circuit(kTestbedQubits, std::move(gates), {2, 3});
}

StepPlan step_plan(std::size_t repetitions) {
  if (repetitions == 0) throw InvalidArgument("repetitions must be >= 1");
  // Step 1 ends after CNOT(0,2); step 2 adds CNOT(1,3) and X(0); step 3
  // closes the repetition with X(1) and the Toffoli.
  StepPlan plan;
  for (std::size_t r = 0; r < repetitions; ++r) {
    const auto base = r * kGatesPerRepetition;
    plan.cut_points.push_back(base + 3);
    plan.cut_points.push_back(base + 5);
    plan.cut_points.push_back(base + 7);
  }
  return plan;
}

Circuit prefix(const Circuit& circuit, std::size_t cut) {
  if (cut == 0 || cut > circuit.size()) {
    throw InvalidArgument("prefix cut " + std::to_string(cut) +
                          " outside [1, " + std::to_string(circuit.size()) + "]");
  }
  std::vector<Gate> gates(circuit.gates().begin(),
                          circuit.gates().begin() + static_cast<std::ptrdiff_t>(cut));
  return Circuit(circuit.n_qubits(), std::move(gates), circuit.measured());
}

std::vector<Circuit> testbed_steps(std::size_t repetitions) {
  const auto full = build_testbed(repetitions);
  std::vector<Circuit> out;
  for (auto cut : step_plan(repetitions).cut_points) out.push_back(prefix(full, cut));
  return out;
}

nlohmann::json to_json(const Circuit& circuit) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : circuit.gates()) {
    gates.push_back({{"kind", std::string(to_string(g.kind()))}, {"qubits", g.qubits()}});
  }
  return {{"n_qubits", circuit.n_qubits()}, {"gates", gates}, {"measured", circuit.measured()}};
}

Circuit circuit_from_json(const nlohmann::json& j) {
  try {
    std::vector<Gate> gates;
    for (const auto& g : j.at("gates")) {
      gates.emplace_back(gate_kind_from_string(g.at("kind").get<std::string>()),
                         g.at("qubits").get<std::vector<std::size_t>>());
    }
    return Circuit(j.at("n_qubits").get<std::size_t>(), std::move(gates),
                   j.at("measured").get<std::vector<std::size_t>>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("circuit JSON: ") + e.what());
  }
}

std::string to_text(const Circuit& circuit) {
  std::ostringstream os;
  os << circuit.n_qubits() << " qubits, " << circuit.size() << " gates, measured:";
  for (auto q : circuit.measured()) os << " q" << q;
  os << '\n';
  for (std::size_t i = 0; i < circuit.size(); ++i) {
    const auto& g = circuit.gates()[i];
    os << (i + 1 < 10 ? "   " : "  ") << i + 1 << ": " << to_string(g.kind());
    const auto& q = g.qubits();
    switch (g.kind()) {
      case GateKind::Hadamard:
      case GateKind::PauliX: os << " q" << q[0]; break;
      case GateKind::CNOT: os << " q" << q[0] << " -> q" << q[1]; break;
      case GateKind::Toffoli: os << " q" << q[0] << ",q" << q[1] << " -> q" << q[2]; break;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace nfp
