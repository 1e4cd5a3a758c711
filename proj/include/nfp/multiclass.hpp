#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "nfp/smo.hpp"

namespace nfp {

enum class MulticlassStrategy { OneVsOne, OneVsAll };

std::string_view to_string(MulticlassStrategy strategy);
MulticlassStrategy strategy_from_string(std::string_view name);

/// A binary model separating `positive` (+1) from `negative` (-1, or every
/// other class when negative < 0).
struct PairModel {
  int positive = 0;
  int negative = 1;
  BinaryModel model;
};

/**
 * Multiclass classifier built from binary SVMs. OVO holds k(k-1)/2 models
 * for pairs a < b with a as the positive class; OVA holds k models.
 */
struct MulticlassModel {
  MulticlassStrategy strategy = MulticlassStrategy::OneVsOne;
  std::size_t n_classes = 2;
  std::vector<PairModel> models;

  int predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  std::vector<int> predict_rows(const Eigen::MatrixXd& x) const;
  bool converged() const;
  std::size_t support_vector_count() const;
};

/**
 * OVO vote over pairwise decision values (one per model in `models` order).
 * Majority wins; ties go to the larger summed |decision| of won contests,
 * then to the lowest class id.
 */
int ovo_vote(const std::vector<PairModel>& models, const std::vector<double>& decisions,
             std::size_t n_classes);

/// Trains every binary subproblem; labels in [0, n_classes).
MulticlassModel train_multiclass(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                                 std::size_t n_classes, const Kernel& kernel,
                                 const SmoParams& params,
                                 MulticlassStrategy strategy = MulticlassStrategy::OneVsOne,
                                 std::size_t workers = 1);

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

}  // namespace nfp
