#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfp/dataset.hpp"
#include "nfp/multiclass.hpp"

namespace nfp {

struct Candidate {
  Kernel kernel;
  double C = 1.0;
};

/// Grid of kernels and C values. Polynomial and RBF gammas of 0 mean
/// 1 / n_features at expansion time.
struct CandidateGrid {
  bool linear = true;
  std::vector<int> poly_degrees = {2, 3, 4};
  double poly_gamma = 0.0;
  double poly_offset = 1.0;
  std::vector<double> rbf_gammas = {0.0, 1.0, 10.0};
  std::vector<double> c_values = {0.1, 1.0, 10.0, 100.0};
};

/// Canonical order: linear, poly by degree, RBF by gamma list; C innermost.
std::vector<Candidate> expand(const CandidateGrid& grid, std::size_t n_features);

struct CandidateResult {
  Candidate candidate;
  bool failed = false;
  std::string error;
  double validation_accuracy = 0.0;
  bool converged = false;
  std::size_t support_vectors = 0;
};

struct SelectionReport {
  std::vector<CandidateResult> candidates;
  std::size_t chosen = 0;
  double test_accuracy = 0.0;
  MulticlassModel model;  // the chosen candidate, trained on the training set
};

struct SelectionOptions {
  MulticlassStrategy strategy = MulticlassStrategy::OneVsOne;
  double tol = 1e-3;
  std::size_t max_passes = 100;
  std::size_t workers = 0;
};

/**
 * Trains every candidate on `train`, scores it on `validation`, and
 * evaluates only the best one on `test`. Ties on validation accuracy go to
 * the earlier candidate. Training failures mark the candidate failed.
 */
SelectionReport model_select(const LabeledDataset& train, const LabeledDataset& validation,
                             const LabeledDataset& test, const std::vector<Candidate>& candidates,
                             const SelectionOptions& options = {});

/// model_select on the three parts of a split.
SelectionReport model_select(const LabeledDataset& dataset, const Split& split,
                             const std::vector<Candidate>& candidates,
                             const SelectionOptions& options = {});

nlohmann::ordered_json to_json(const SelectionReport& report);

}  // namespace nfp
