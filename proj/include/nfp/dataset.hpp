#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "nfp/acquisition.hpp"

namespace nfp {

/**
 * Labeled outcome-probability features. Row i of `features` concatenates,
 * for every step in `steps` (ascending), the empirical probabilities of
 * that step's outcomes.
 */
struct LabeledDataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  std::vector<std::string> class_names;
  std::vector<std::size_t> steps;
  std::size_t outcomes_per_step = 4;
  nlohmann::json provenance = nlohmann::json::object();

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  std::size_t n_classes() const { return class_names.size(); }
  std::vector<std::size_t> class_counts() const;
};

/// Throws DataError unless labels, dimensions and class list agree.
void validate(const LabeledDataset& dataset);

/// counts[o] / shots in outcome order.
std::vector<double> probabilities(const Counts& counts, std::uint64_t shots);

/// How records of different steps are matched into one example.
enum class GroupKey {
  // j-th record of a step at a timestamp pairs with the j-th record of every
  // other step at that timestamp (FAST sub-batches share timestamps).
  TimeOrdinal,
  // j-th record of a step overall.
  Ordinal,
};

struct BuildResult {
  LabeledDataset dataset;
  std::size_t skipped_groups = 0;  // groups lacking a requested step
};

/// One class per device; class names are the devices' names.
BuildResult build_machine_dataset(const std::vector<std::vector<RunRecord>>& records_by_device,
                                  const std::vector<std::size_t>& steps,
                                  GroupKey key = GroupKey::TimeOrdinal);

/// Labels are equal-width time windows over the records' time span.
BuildResult build_timeseries_dataset(const std::vector<RunRecord>& records,
                                     const std::vector<std::size_t>& steps,
                                     std::size_t n_windows,
                                     GroupKey key = GroupKey::TimeOrdinal);

/// Steps 1..T.
std::vector<std::size_t> cumulative_steps(std::size_t t);
/// "1..9", "3", or "1,2,5"; result sorted ascending and de-duplicated.
std::vector<std::size_t> parse_steps(const std::string& text);

/// Restrict features to a subset of the dataset's steps.
LabeledDataset select_steps(const LabeledDataset& dataset, const std::vector<std::size_t>& steps);
LabeledDataset subset(const LabeledDataset& dataset, const std::vector<std::size_t>& rows);

struct SplitFractions {
  double train = 0.5;
  double validation = 0.25;
  double test = 0.25;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
  SplitFractions fractions;
  std::uint64_t seed = 0;
};

/**
 * Stratified split. Per class, the train and train+validation boundaries
 * are rounded from the requested fractions, with at least one example of
 * every class in each part. Index lists are sorted.
 */
Split split(const LabeledDataset& dataset, SplitFractions fractions, std::uint64_t seed);

/// CSV with header "label,s<step>_p<outcome>,..." plus a JSON sidecar.
void write_dataset(const LabeledDataset& dataset, const std::string& csv_path);
LabeledDataset read_dataset(const std::string& csv_path);
/// Sidecar location for a dataset CSV: same stem, ".json" extension.
std::string sidecar_path(const std::string& csv_path);

}  // namespace nfp
