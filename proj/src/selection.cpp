#include "nfp/selection.hpp"

#include "nfp/error.hpp"
#include "nfp/parallel.hpp"

namespace nfp {

std::vector<Candidate> expand(const CandidateGrid& grid, std::size_t n_features) {
  if (grid.c_values.empty()) throw InvalidArgument("C grid is empty");
  if (n_features == 0) throw InvalidArgument("n_features must be >= 1");
  const double inv_n = 1.0 / static_cast<double>(n_features);
  std::vector<Kernel> kernels;
  if (grid.linear) kernels.push_back(Kernel::linear());
  for (int d : grid.poly_degrees) {
    kernels.push_back(Kernel::polynomial(d, grid.poly_gamma > 0 ? grid.poly_gamma : inv_n, grid.poly_offset));
  }
  for (double g : grid.rbf_gammas) kernels.push_back(Kernel::rbf(g > 0 ? g : inv_n));
  if (kernels.empty()) throw InvalidArgument("candidate grid has no kernels");
  std::vector<Candidate> out;
  for (const auto& k : kernels) {
    for (double c : grid.c_values) {
      if (!(c > 0.0)) throw InvalidArgument("C values must be > 0");
      out.push_back({k, c});
    }
  }
  return out;
}

SelectionReport model_select(const LabeledDataset& train, const LabeledDataset& validation,
                             const LabeledDataset& test, const std::vector<Candidate>& candidates,
                             const SelectionOptions& options) {
  if (train.size() == 0 || validation.size() == 0 || test.size() == 0) {
    throw InvalidArgument("train, validation and test sets must be non-empty");
  }
  if (train.dim() != validation.dim() || train.dim() != test.dim()) {
    throw InvalidArgument("train, validation and test dimensions differ");
  }
  if (train.n_classes() != validation.n_classes() || train.n_classes() != test.n_classes()) {
    throw InvalidArgument("train, validation and test class lists differ");
  }
  if (candidates.empty()) throw InvalidArgument("no candidates to select from");

  SelectionReport report;
  report.candidates.resize(candidates.size());
  std::vector<MulticlassModel> models(candidates.size());
  parallel_for(candidates.size(), options.workers, [&](std::size_t i) {
    auto& r = report.candidates[i];
    r.candidate = candidates[i];
    try {
      SmoParams p;
      p.C = candidates[i].C;
      p.tol = options.tol;
      p.max_passes = options.max_passes;
      models[i] = train_multiclass(train.features, train.labels, train.n_classes(),
                                   candidates[i].kernel, p, options.strategy, 1);
      r.validation_accuracy = accuracy(models[i].predict_rows(validation.features), validation.labels);
      r.converged = models[i].converged();
      r.support_vectors = models[i].support_vector_count();
    } catch (const std::exception& e) {
      r.failed = true;
      r.error = e.what();
    }
  });

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < report.candidates.size(); ++i) {
    const auto& r = report.candidates[i];
    if (r.failed) continue;
    if (!best || r.validation_accuracy > report.candidates[*best].validation_accuracy) best = i;
  }
  if (!best) throw NumericError("every candidate failed to train");
  report.chosen = *best;
  report.model = std::move(models[*best]);
  report.test_accuracy = accuracy(report.model.predict_rows(test.features), test.labels);
  return report;
}

SelectionReport model_select(const LabeledDataset& dataset, const Split& split,
                             const std::vector<Candidate>& candidates,
                             const SelectionOptions& options) {
  return model_select(subset(dataset, split.train), subset(dataset, split.validation),
                      subset(dataset, split.test), candidates, options);
}

nlohmann::ordered_json to_json(const SelectionReport& report) {
  nlohmann::ordered_json cands = nlohmann::ordered_json::array();
  for (const auto& r : report.candidates) {
    nlohmann::ordered_json c;
    c["kernel"] = r.candidate.kernel.label();
    c["C"] = r.candidate.C;
    if (r.failed) {
      c["failed"] = true;
      c["error"] = r.error;
    } else {
      c["validation_accuracy"] = r.validation_accuracy;
      c["converged"] = r.converged;
      c["support_vectors"] = r.support_vectors;
    }
    cands.push_back(std::move(c));
  }
  const auto& chosen = report.candidates.at(report.chosen);
  nlohmann::ordered_json j;
  j["strategy"] = std::string(to_string(report.model.strategy));
  j["chosen"] = {{"index", report.chosen},
                 {"kernel", chosen.candidate.kernel.label()},
                 {"C", chosen.candidate.C},
                 {"validation_accuracy", chosen.validation_accuracy}};
  j["test_accuracy"] = report.test_accuracy;
  j["candidates"] = std::move(cands);
  return j;
}

}  // namespace nfp
