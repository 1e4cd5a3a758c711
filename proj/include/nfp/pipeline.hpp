#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nfp/acquisition.hpp"
#include "nfp/dataset.hpp"
#include "nfp/selection.hpp"

namespace nfp {

enum class ExperimentKind {
  Machines,    // classify which device produced an example
  StepsCurve,  // Machines, repeated for cumulative steps 1..T
  TimeSeries,  // classify the time window of one device's examples
};

/**
 * A named end-to-end experiment: devices, acquisition regime, features,
 * split and SVM grid. Every seed is explicit.
 */
struct PipelineConfig {
  std::string name;
  ExperimentKind kind = ExperimentKind::Machines;
  std::vector<VirtualDevice> devices;
  Campaign campaign;  // device field is replaced per device
  std::vector<std::size_t> steps = cumulative_steps(9);
  std::size_t windows = 2;
  bool drift_control = false;  // TimeSeries: rerun with drift removed
  SplitFractions fractions;
  std::uint64_t split_seed = 0;
  CandidateGrid grid;
  SelectionOptions selection;
};

PipelineConfig pipeline_config_from_json(const std::string& name, const nlohmann::json& j);
nlohmann::ordered_json to_json(const PipelineConfig& config);

/// JSON text of the bundled benchmark configurations.
const std::string& builtin_config_text();
/// Named configurations from a document {"<name>": {...}, ...}.
std::map<std::string, PipelineConfig> parse_configs(const nlohmann::json& doc);
std::map<std::string, PipelineConfig> builtin_configs();
std::map<std::string, PipelineConfig> load_configs(const std::string& path);

/// One trained-and-selected classification problem.
struct ExperimentRow {
  std::string experiment;
  std::vector<std::size_t> steps;
  std::size_t examples = 0;
  std::size_t skipped_groups = 0;
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
  SelectionReport selection;
};

struct PipelineResult {
  std::string name;
  std::vector<ExperimentRow> rows;
};

/// Acquire, build datasets, split and select per row of the experiment.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Select on one dataset with the given split settings and grid.
ExperimentRow run_selection(const std::string& experiment, const LabeledDataset& dataset,
                            std::size_t skipped_groups, SplitFractions fractions,
                            std::uint64_t split_seed, const CandidateGrid& grid,
                            const SelectionOptions& options);

/// Accuracy for steps {1}, {1,2}, ... up to the dataset's largest step.
PipelineResult steps_curve(const std::string& name, const LabeledDataset& dataset,
                           SplitFractions fractions, std::uint64_t split_seed,
                           const CandidateGrid& grid, const SelectionOptions& options);

nlohmann::ordered_json to_json(const PipelineResult& result);

/// The columns of the rendered accuracy table.
struct SummaryRow {
  std::string experiment;
  std::vector<std::size_t> steps;
  std::size_t examples = 0;
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
  std::string kernel;
  double C = 0.0;
  double validation_accuracy = 0.0;
  double test_accuracy = 0.0;
};

std::vector<SummaryRow> summarize(const PipelineResult& result);
/// Rows of a report previously written by to_json(PipelineResult).
std::vector<SummaryRow> summary_from_json(const nlohmann::json& report);

/// One line per row: experiment, steps, sizes, chosen kernel, accuracies.
std::string to_csv(const std::vector<SummaryRow>& rows);
std::string to_text(const std::string& title, const std::vector<SummaryRow>& rows);
inline std::string to_csv(const PipelineResult& r) { return to_csv(summarize(r)); }
inline std::string to_text(const PipelineResult& r) { return to_text(r.name, summarize(r)); }

}  // namespace nfp
