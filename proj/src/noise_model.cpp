#include "nfp/noise_model.hpp"

#include <algorithm>
#include <fstream>

#include "nfp/error.hpp"

namespace nfp {

namespace {

constexpr std::array kAllParams = {NoiseParam::P1,     NoiseParam::P2,  NoiseParam::Gamma,
                                   NoiseParam::Lambda, NoiseParam::E01, NoiseParam::E10};

void validate(const QubitNoise& q, const std::string& where) {
  for (auto p : kAllParams) {
    const double v = q[p];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvalidArgument(where + ": " + std::string(to_string(p)) + " = " +
                            std::to_string(v) + " outside [0, 1]");
    }
  }
}

QubitNoise read_params(const nlohmann::json& j, QubitNoise base) {
  for (auto p : kAllParams) {
    const std::string key(to_string(p));
    if (j.contains(key)) base[p] = j.at(key).get<double>();
  }
  return base;
}

nlohmann::json write_params(const QubitNoise& q) {
  nlohmann::json j = nlohmann::json::object();
  for (auto p : kAllParams) j[std::string(to_string(p))] = q[p];
  return j;
}

}  // namespace

std::string_view to_string(NoiseParam param) {
  switch (param) {
    case NoiseParam::P1: return "p1";
    case NoiseParam::P2: return "p2";
    case NoiseParam::Gamma: return "gamma";
    case NoiseParam::Lambda: return "lambda";
    case NoiseParam::E01: return "e01";
    case NoiseParam::E10: return "e10";
  }
  return "?";
}

NoiseParam noise_param_from_string(std::string_view name) {
  for (auto p : kAllParams) {
    if (to_string(p) == name) return p;
  }
  throw InvalidArgument("unknown noise parameter '" + std::string(name) + "'");
}

double& QubitNoise::operator[](NoiseParam param) {
  switch (param) {
    case NoiseParam::P1: return p1;
    case NoiseParam::P2: return p2;
    case NoiseParam::Gamma: return gamma;
    case NoiseParam::Lambda: return lambda;
    case NoiseParam::E01: return e01;
    case NoiseParam::E10: return e10;
  }
  return p1;
}

double QubitNoise::operator[](NoiseParam param) const {
  return const_cast<QubitNoise&>(*this)[param];
}

double Drift::offset(double t_hours) const {
  if (schedule.empty()) return rate_per_hour * t_hours;
  if (t_hours <= schedule.front().first) return schedule.front().second;
  if (t_hours >= schedule.back().first) return schedule.back().second;
  auto hi = std::upper_bound(schedule.begin(), schedule.end(), t_hours,
                             [](double t, const auto& knot) { return t < knot.first; });
  auto lo = std::prev(hi);
  const double w = (t_hours - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

NoiseModel::NoiseModel(QubitNoise defaults, std::map<std::size_t, QubitNoise> overrides,
                       std::vector<Drift> drift)
    : defaults_(defaults), overrides_(std::move(overrides)), drift_(std::move(drift)) {
  validate(defaults_, "noise defaults");
  for (const auto& [q, params] : overrides_) validate(params, "noise of q" + std::to_string(q));
  for (const auto& d : drift_) {
    for (std::size_t i = 1; i < d.schedule.size(); ++i) {
      if (!(d.schedule[i].first > d.schedule[i - 1].first)) {
        throw InvalidArgument("drift schedule times must strictly increase");
      }
    }
  }
}

QubitNoise NoiseModel::at(std::size_t qubit, double t_hours) const {
  auto it = overrides_.find(qubit);
  QubitNoise q = it == overrides_.end() ? defaults_ : it->second;
  for (const auto& d : drift_) {
    if (d.qubit && *d.qubit != qubit) continue;
    q[d.param] += d.offset(t_hours);
  }
  for (auto p : kAllParams) q[p] = std::clamp(q[p], 0.0, 1.0);
  return q;
}

NoiseModel NoiseModel::without_drift() const { return NoiseModel(defaults_, overrides_, {}); }

VirtualDevice::VirtualDevice(std::string name_, NoiseModel noise_, std::uint64_t seed_)
    : name(std::move(name_)), noise(std::move(noise_)), seed(seed_) {
  if (name.empty()) throw InvalidArgument("device name must be non-empty");
}

nlohmann::json to_json(const NoiseModel& noise) {
  nlohmann::json j = write_params(noise.defaults());
  if (!noise.overrides().empty()) {
    nlohmann::json qubits = nlohmann::json::object();
    for (const auto& [q, params] : noise.overrides()) qubits[std::to_string(q)] = write_params(params);
    j["qubits"] = qubits;
  }
  if (!noise.drift().empty()) {
    nlohmann::json drift = nlohmann::json::array();
    for (const auto& d : noise.drift()) {
      nlohmann::json e = {{"param", std::string(to_string(d.param))}};
      if (d.qubit) e["qubit"] = *d.qubit;
      if (d.schedule.empty()) {
        e["rate_per_hour"] = d.rate_per_hour;
      } else {
        nlohmann::json knots = nlohmann::json::array();
        for (const auto& [t, v] : d.schedule) knots.push_back({t, v});
        e["schedule"] = knots;
      }
      drift.push_back(e);
    }
    j["drift"] = drift;
  }
  return j;
}

NoiseModel noise_model_from_json(const nlohmann::json& j) {
  try {
    const QubitNoise defaults = read_params(j, QubitNoise{});
    std::map<std::size_t, QubitNoise> overrides;
    if (j.contains("qubits")) {
      for (const auto& [key, value] : j.at("qubits").items()) {
        overrides[static_cast<std::size_t>(std::stoul(key))] = read_params(value, defaults);
      }
    }
    std::vector<Drift> drift;
    if (j.contains("drift")) {
      for (const auto& e : j.at("drift")) {
        Drift d;
        d.param = noise_param_from_string(e.at("param").get<std::string>());
        if (e.contains("qubit")) d.qubit = e.at("qubit").get<std::size_t>();
        if (e.contains("schedule")) {
          for (const auto& knot : e.at("schedule")) {
            d.schedule.emplace_back(knot.at(0).get<double>(), knot.at(1).get<double>());
          }
        } else {
          d.rate_per_hour = e.at("rate_per_hour").get<double>();
        }
        drift.push_back(std::move(d));
      }
    }
    return NoiseModel(defaults, std::move(overrides), std::move(drift));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("noise model JSON: ") + e.what());
  } catch (const std::logic_error& e) {
    // std::stoul on a bad qubit key, or InvalidArgument from validation
    throw DataError(std::string("noise model JSON: ") + e.what());
  }
}

nlohmann::json to_json(const VirtualDevice& device) {
  return {{"name", device.name}, {"seed", device.seed}, {"noise", to_json(device.noise)}};
}

VirtualDevice device_from_json(const nlohmann::json& j) {
  try {
    return VirtualDevice(j.at("name").get<std::string>(), noise_model_from_json(j.at("noise")),
                         j.at("seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("device JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("device JSON: ") + e.what());
  }
}

VirtualDevice load_device(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open device file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return device_from_json(j);
}

}  // namespace nfp
