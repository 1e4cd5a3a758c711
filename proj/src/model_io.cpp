#include "nfp/model_io.hpp"

#include <fstream>

#include "nfp/error.hpp"

namespace nfp {

nlohmann::ordered_json to_json(const BinaryModel& m) {
  nlohmann::ordered_json j;
  j["kernel"] = to_json(m.kernel);
  j["bias"] = m.bias;
  nlohmann::ordered_json svs = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.support_vectors.rows(); ++i) {
    std::vector<double> row(m.support_vectors.row(i).begin(), m.support_vectors.row(i).end());
    svs.push_back(row);
  }
  j["support_vectors"] = std::move(svs);
  j["coefficients"] = std::vector<double>(m.coef.begin(), m.coef.end());
  j["support_indices"] = m.support_indices;
  j["metadata"] = {{"C", m.C},
                   {"tol", m.tol},
                   {"updates", m.updates},
                   {"converged", m.converged},
                   {"dual_objective", m.dual_objective}};
  return j;
}

BinaryModel binary_model_from_json(const nlohmann::json& j) {
  BinaryModel m;
  m.kernel = kernel_from_json(j.at("kernel"));
  m.bias = j.at("bias").get<double>();
  const auto svs = j.at("support_vectors").get<std::vector<std::vector<double>>>();
  const auto coef = j.at("coefficients").get<std::vector<double>>();
  if (svs.size() != coef.size()) throw DataError("support vector and coefficient counts differ");
  const auto dim = svs.empty() ? 0 : svs.front().size();
  m.support_vectors.resize(static_cast<Eigen::Index>(svs.size()), static_cast<Eigen::Index>(dim));
  m.coef.resize(static_cast<Eigen::Index>(coef.size()));
  for (std::size_t i = 0; i < svs.size(); ++i) {
    if (svs[i].size() != dim) throw DataError("ragged support vectors");
    for (std::size_t k = 0; k < dim; ++k) {
      m.support_vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = svs[i][k];
    }
    m.coef[static_cast<Eigen::Index>(i)] = coef[i];
  }
  if (j.contains("support_indices")) m.support_indices = j.at("support_indices").get<std::vector<std::size_t>>();
  if (j.contains("metadata")) {
    const auto& md = j.at("metadata");
    m.C = md.value("C", m.C);
    m.tol = md.value("tol", m.tol);
    m.updates = md.value("updates", m.updates);
    m.converged = md.value("converged", m.converged);
    m.dual_objective = md.value("dual_objective", m.dual_objective);
  }
  return m;
}

nlohmann::ordered_json to_json(const MulticlassModel& model,
                               const std::vector<std::string>& class_names) {
  nlohmann::ordered_json j;
  j["strategy"] = std::string(to_string(model.strategy));
  j["n_classes"] = model.n_classes;
  if (!class_names.empty()) j["class_names"] = class_names;
  nlohmann::ordered_json models = nlohmann::ordered_json::array();
  for (const auto& pm : model.models) {
    nlohmann::ordered_json e;
    e["positive"] = pm.positive;
    e["negative"] = pm.negative;
    const auto body = to_json(pm.model);
    for (const auto& [k, v] : body.items()) e[k] = v;
    models.push_back(std::move(e));
  }
  j["models"] = std::move(models);
  return j;
}

MulticlassModel multiclass_model_from_json(const nlohmann::json& j) {
  try {
    MulticlassModel m;
    m.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    m.n_classes = j.at("n_classes").get<std::size_t>();
    for (const auto& e : j.at("models")) {
      m.models.push_back({e.at("positive").get<int>(), e.at("negative").get<int>(),
                          binary_model_from_json(e)});
    }
    const auto expected = m.strategy == MulticlassStrategy::OneVsOne
                              ? m.n_classes * (m.n_classes - 1) / 2
                              : m.n_classes;
    if (m.models.size() != expected) throw DataError("wrong number of binary models for the class count");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(std::string("model JSON: ") + e.what());
  }
}

void save_model(const MulticlassModel& model, const std::vector<std::string>& class_names,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << to_json(model, class_names).dump(2) << '\n';
}

MulticlassModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return multiclass_model_from_json(j);
}

}  // namespace nfp
