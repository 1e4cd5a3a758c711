#include "nfp/multiclass.hpp"

#include <cmath>
#include <string>

#include "nfp/error.hpp"
#include "nfp/parallel.hpp"

namespace nfp {

std::string_view to_string(MulticlassStrategy s) {
  return s == MulticlassStrategy::OneVsOne ? "ovo" : "ova";
}

MulticlassStrategy strategy_from_string(std::string_view name) {
  if (name == "ovo") return MulticlassStrategy::OneVsOne;
  if (name == "ova") return MulticlassStrategy::OneVsAll;
  throw InvalidArgument("unknown multiclass strategy '" + std::string(name) + "'");
}

int ovo_vote(const std::vector<PairModel>& models, const std::vector<double>& decisions,
             std::size_t n_classes) {
  std::vector<std::size_t> votes(n_classes, 0);
  std::vector<double> strength(n_classes, 0.0);
  for (std::size_t m = 0; m < models.size(); ++m) {
    const double d = decisions[m];
    const auto winner = static_cast<std::size_t>(d >= 0.0 ? models[m].positive : models[m].negative);
    ++votes.at(winner);
    strength[winner] += std::abs(d);
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < n_classes; ++c) {
    if (votes[c] > votes[best] || (votes[c] == votes[best] && strength[c] > strength[best])) best = c;
  }
  return static_cast<int>(best);
}

int MulticlassModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  std::vector<double> d(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) d[m] = models[m].model.decision(x);
  if (strategy == MulticlassStrategy::OneVsOne) return ovo_vote(models, d, n_classes);
  std::size_t best = 0;
  for (std::size_t m = 1; m < models.size(); ++m) {
    if (d[m] > d[best]) best = m;
  }
  return models[best].positive;
}

std::vector<int> MulticlassModel::predict_rows(const Eigen::MatrixXd& x) const {
  std::vector<Eigen::VectorXd> d;
  d.reserve(models.size());
  for (const auto& m : models) d.push_back(m.model.decisions(x));
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  std::vector<double> row(models.size());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (std::size_t m = 0; m < models.size(); ++m) row[m] = d[m][i];
    if (strategy == MulticlassStrategy::OneVsOne) {
      out[static_cast<std::size_t>(i)] = ovo_vote(models, row, n_classes);
    } else {
      std::size_t best = 0;
      for (std::size_t m = 1; m < models.size(); ++m) {
        if (row[m] > row[best]) best = m;
      }
      out[static_cast<std::size_t>(i)] = models[best].positive;
    }
  }
  return out;
}

bool MulticlassModel::converged() const {
  for (const auto& m : models) {
    if (!m.model.converged) return false;
  }
  return true;
}

std::size_t MulticlassModel::support_vector_count() const {
  std::size_t n = 0;
  for (const auto& m : models) n += m.model.support_indices.size();
  return n;
}

MulticlassModel train_multiclass(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                                 std::size_t n_classes, const Kernel& kernel,
                                 const SmoParams& params, MulticlassStrategy strategy,
                                 std::size_t workers) {
  if (n_classes < 2) throw InvalidArgument("need at least 2 classes");
  if (static_cast<std::size_t>(x.rows()) != labels.size()) throw InvalidArgument("feature rows and labels disagree");
  for (int l : labels) {
    if (l < 0 || static_cast<std::size_t>(l) >= n_classes) throw InvalidArgument("label out of range");
  }
  MulticlassModel out;
  out.strategy = strategy;
  out.n_classes = n_classes;
  if (strategy == MulticlassStrategy::OneVsOne) {
    for (std::size_t a = 0; a < n_classes; ++a) {
      for (std::size_t b = a + 1; b < n_classes; ++b) {
        out.models.push_back({static_cast<int>(a), static_cast<int>(b), {}});
      }
    }
  } else {
    for (std::size_t c = 0; c < n_classes; ++c) out.models.push_back({static_cast<int>(c), -1, {}});
  }

  const Eigen::MatrixXd full_gram = gram(x, kernel);
  parallel_for(out.models.size(), workers, [&](std::size_t m) {
    auto& pm = out.models[m];
    std::vector<Eigen::Index> rows;
    std::vector<int> y;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == pm.positive) {
        rows.push_back(static_cast<Eigen::Index>(i));
        y.push_back(1);
      } else if (pm.negative < 0 || labels[i] == pm.negative) {
        rows.push_back(static_cast<Eigen::Index>(i));
        y.push_back(-1);
      }
    }
    const Eigen::MatrixXd sub_x = x(rows, Eigen::all);
    const Eigen::MatrixXd sub_g = full_gram(rows, rows);
    pm.model = train_binary(sub_x, sub_g, y, kernel, params);
    for (auto& i : pm.model.support_indices) i = static_cast<std::size_t>(rows[i]);
  });
  return out;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || truth.empty()) throw InvalidArgument("accuracy needs equal, non-empty label lists");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hit += predicted[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

}  // namespace nfp
