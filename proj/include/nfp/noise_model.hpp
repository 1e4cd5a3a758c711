#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace nfp {

enum class NoiseParam { P1, P2, Gamma, Lambda, E01, E10 };

std::string_view to_string(NoiseParam param);
NoiseParam noise_param_from_string(std::string_view name);

/// Error parameters of a single qubit. All values are probabilities.
struct QubitNoise {
  double p1 = 0.0;      // depolarizing after single-qubit gates
  double p2 = 0.0;      // depolarizing per operand after CNOT / Toffoli
  double gamma = 0.0;   // amplitude damping after every gate
  double lambda = 0.0;  // phase damping after every gate
  double e01 = 0.0;     // readout P(1 | 0)
  double e10 = 0.0;     // readout P(0 | 1)

  double& operator[](NoiseParam param);
  double operator[](NoiseParam param) const;
  friend bool operator==(const QubitNoise&, const QubitNoise&) = default;
};

/**
 * Time dependence of one parameter: offset(t) = rate * t, or a
 * piecewise-linear offset schedule of (t_hours, offset) knots when one is
 * given. The schedule is held flat outside its knot range. `qubit` unset
 * means every qubit.
 */
struct Drift {
  NoiseParam param = NoiseParam::P1;
  std::optional<std::size_t> qubit;
  double rate_per_hour = 0.0;
  std::vector<std::pair<double, double>> schedule;

  double offset(double t_hours) const;
  friend bool operator==(const Drift&, const Drift&) = default;
};

/// Per-qubit gate and readout noise with optional drift.
class NoiseModel {
 public:
  NoiseModel() = default;
  explicit NoiseModel(QubitNoise defaults, std::map<std::size_t, QubitNoise> overrides = {},
                      std::vector<Drift> drift = {});

  static NoiseModel ideal() { return NoiseModel(); }

  /// Parameters of `qubit` at time t (hours), clamped to [0, 1].
  QubitNoise at(std::size_t qubit, double t_hours = 0.0) const;

  const QubitNoise& defaults() const { return defaults_; }
  const std::map<std::size_t, QubitNoise>& overrides() const { return overrides_; }
  const std::vector<Drift>& drift() const { return drift_; }

  /// Same static parameters with every drift removed.
  NoiseModel without_drift() const;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;

 private:
  QubitNoise defaults_;
  std::map<std::size_t, QubitNoise> overrides_;
  std::vector<Drift> drift_;
};

/// A simulated device: a named noise model plus its sampling seed.
struct VirtualDevice {
  std::string name;
  NoiseModel noise;
  std::uint64_t seed = 0;

  VirtualDevice(std::string name, NoiseModel noise, std::uint64_t seed);
  friend bool operator==(const VirtualDevice&, const VirtualDevice&) = default;
};

nlohmann::json to_json(const NoiseModel& noise);
NoiseModel noise_model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const VirtualDevice& device);
VirtualDevice device_from_json(const nlohmann::json& j);
VirtualDevice load_device(const std::string& path);

}  // namespace nfp
