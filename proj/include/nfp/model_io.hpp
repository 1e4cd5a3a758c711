#pragma once

#include <string>

#include <json.hpp>

#include "nfp/multiclass.hpp"

namespace nfp {

nlohmann::ordered_json to_json(const BinaryModel& model);
BinaryModel binary_model_from_json(const nlohmann::json& j);

/// {"strategy", "n_classes", "class_names", "models": [{"positive", "negative", ...}]}
nlohmann::ordered_json to_json(const MulticlassModel& model,
                               const std::vector<std::string>& class_names = {});
MulticlassModel multiclass_model_from_json(const nlohmann::json& j);

void save_model(const MulticlassModel& model, const std::vector<std::string>& class_names,
                const std::string& path);
MulticlassModel load_model(const std::string& path);

}  // namespace nfp
