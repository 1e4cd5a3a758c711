#include "nfp/pipeline.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nfp/error.hpp"

namespace nfp {

namespace {

// Bundled benchmark experiments. Device parameters are synthetic settings
// chosen to give distinct fingerprints; they are not measured hardware values.
const char* const kBuiltinConfigs = R"json({
  "two-device": {
    "kind": "machines",
    "devices": [
      {"name": "device-a", "seed": 1001,
       "noise": {"p1": 0.005, "p2": 0.02, "gamma": 0.0, "lambda": 0.0, "e01": 0.01, "e10": 0.01}},
      {"name": "device-b", "seed": 1002,
       "noise": {"p1": 0.02, "p2": 0.02, "gamma": 0.0, "lambda": 0.0, "e01": 0.04, "e10": 0.04}}
    ],
    "campaign": {"mode": "fast", "runs": 63},
    "steps": "1..9",
    "split": {"train": 0.5, "validation": 0.25, "test": 0.25, "seed": 7},
    "svm": {"strategy": "ovo"}
  },
  "steps-curve": {
    "kind": "steps-curve",
    "devices": [
      {"name": "device-a", "seed": 1001,
       "noise": {"p1": 0.005, "p2": 0.02, "gamma": 0.0, "lambda": 0.0, "e01": 0.01, "e10": 0.01}},
      {"name": "device-b", "seed": 1002,
       "noise": {"p1": 0.02, "p2": 0.02, "gamma": 0.0, "lambda": 0.0, "e01": 0.04, "e10": 0.04}}
    ],
    "campaign": {"mode": "fast", "runs": 63},
    "steps": "1..9",
    "split": {"train": 0.5, "validation": 0.25, "test": 0.25, "seed": 7},
    "svm": {"strategy": "ovo"}
  },
  "multi-device": {
    "kind": "machines",
    "devices": [
      {"name": "device-a", "seed": 1001,
       "noise": {"p1": 0.005, "p2": 0.02, "gamma": 0.0, "lambda": 0.0, "e01": 0.01, "e10": 0.01}},
      {"name": "device-b", "seed": 1002,
       "noise": {"p1": 0.02, "p2": 0.02, "gamma": 0.0, "lambda": 0.0, "e01": 0.04, "e10": 0.04}},
      {"name": "device-c", "seed": 1003,
       "noise": {"p1": 0.01, "p2": 0.05, "gamma": 0.0, "lambda": 0.0, "e01": 0.02, "e10": 0.02}},
      {"name": "device-d", "seed": 1004,
       "noise": {"p1": 0.01, "p2": 0.02, "gamma": 0.03, "lambda": 0.0, "e01": 0.025, "e10": 0.025}}
    ],
    "campaign": {"mode": "fast", "runs": 63},
    "steps": "1..9",
    "split": {"train": 0.5, "validation": 0.25, "test": 0.25, "seed": 7},
    "svm": {"strategy": "ovo"}
  },
  "time-drift": {
    "kind": "timeseries",
    "devices": [
      {"name": "device-drift", "seed": 2001,
       "noise": {"p1": 0.005, "p2": 0.02, "gamma": 0.0, "lambda": 0.0, "e01": 0.01, "e10": 0.01,
                 "drift": [{"param": "p1", "rate_per_hour": 0.02},
                           {"param": "p2", "rate_per_hour": 0.02}]}}
    ],
    "campaign": {"mode": "slow", "runs": 121, "interval_minutes": 2.0, "run_shots": 1000},
    "steps": "1..9",
    "windows": 2,
    "drift_control": true,
    "split": {"train": 0.4, "validation": 0.2, "test": 0.4, "seed": 7},
    "svm": {"strategy": "ovo"}
  }
}
)json";

ExperimentKind kind_from_string(const std::string& s) {
  if (s == "machines") return ExperimentKind::Machines;
  if (s == "steps-curve") return ExperimentKind::StepsCurve;
  if (s == "timeseries") return ExperimentKind::TimeSeries;
  throw InvalidArgument("unknown experiment kind '" + s + "'");
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Machines: return "machines";
    case ExperimentKind::StepsCurve: return "steps-curve";
    case ExperimentKind::TimeSeries: return "timeseries";
  }
  return "?";
}

std::string steps_label(const std::vector<std::size_t>& steps) {
  if (steps.empty()) return "";
  bool contiguous = true;
  for (std::size_t i = 1; i < steps.size(); ++i) contiguous = contiguous && steps[i] == steps[i - 1] + 1;
  if (steps.size() == 1) return std::to_string(steps[0]);
  if (contiguous) return std::to_string(steps.front()) + ".." + std::to_string(steps.back());
  std::string s;
  for (std::size_t i = 0; i < steps.size(); ++i) s += (i ? ";" : "") + std::to_string(steps[i]);
  return s;
}

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

VirtualDevice device_entry(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (j.contains("file")) {
    auto p = std::filesystem::path(j.at("file").get<std::string>());
    if (p.is_relative()) p = base_dir / p;
    return load_device(p.string());
  }
  return device_from_json(j);
}

std::map<std::string, PipelineConfig> parse_configs_in(const nlohmann::json& doc,
                                                       const std::filesystem::path& base_dir);

PipelineConfig parse_config(const std::string& name, const nlohmann::json& j,
                            const std::filesystem::path& base_dir) {
  PipelineConfig c;
  c.name = name;
  c.kind = kind_from_string(j.at("kind").get<std::string>());
  for (const auto& d : j.at("devices")) c.devices.push_back(device_entry(d, base_dir));

  const auto& camp = j.at("campaign");
  const auto mode = camp.at("mode").get<std::string>();
  if (mode != "fast" && mode != "slow") throw InvalidArgument("campaign mode must be fast or slow");
  c.campaign.mode = mode == "fast" ? CampaignMode::Fast : CampaignMode::Slow;
  c.campaign.n_runs = camp.at("runs").get<std::size_t>();
  c.campaign.repetitions = camp.value("repetitions", c.campaign.repetitions);
  c.campaign.parallelism = camp.value("parallelism", c.campaign.parallelism);
  c.campaign.batch_shots = camp.value("batch_shots", c.campaign.batch_shots);
  c.campaign.sub_batch = camp.value("sub_batch", c.campaign.sub_batch);
  c.campaign.lane_spacing_minutes = camp.value("lane_spacing_minutes", c.campaign.lane_spacing_minutes);
  c.campaign.run_shots = camp.value("run_shots", c.campaign.run_shots);
  c.campaign.interval_minutes = camp.value("interval_minutes", c.campaign.interval_minutes);

  if (j.contains("steps")) {
    const auto& s = j.at("steps");
    c.steps = s.is_string() ? parse_steps(s.get<std::string>()) : s.get<std::vector<std::size_t>>();
  }
  c.windows = j.value("windows", c.windows);
  c.drift_control = j.value("drift_control", c.drift_control);

  const auto& sp = j.at("split");
  c.fractions = {sp.value("train", 0.5), sp.value("validation", 0.25), sp.value("test", 0.25)};
  c.split_seed = sp.at("seed").get<std::uint64_t>();

  if (j.contains("svm")) {
    const auto& s = j.at("svm");
    c.selection.strategy = strategy_from_string(s.value("strategy", std::string("ovo")));
    c.selection.tol = s.value("tol", c.selection.tol);
    c.selection.max_passes = s.value("max_passes", c.selection.max_passes);
    c.grid.linear = s.value("linear", c.grid.linear);
    c.grid.poly_degrees = s.value("poly_degrees", c.grid.poly_degrees);
    c.grid.poly_gamma = s.value("poly_gamma", c.grid.poly_gamma);
    c.grid.poly_offset = s.value("poly_offset", c.grid.poly_offset);
    c.grid.rbf_gammas = s.value("rbf_gammas", c.grid.rbf_gammas);
    c.grid.c_values = s.value("c_values", c.grid.c_values);
  }

  if (c.devices.empty()) throw InvalidArgument("configuration lists no devices");
  if (c.kind == ExperimentKind::TimeSeries && c.devices.size() != 1) {
    throw InvalidArgument("a timeseries experiment uses exactly one device");
  }
  if (c.kind != ExperimentKind::TimeSeries && c.devices.size() < 2) {
    throw InvalidArgument("a machine experiment needs at least 2 devices");
  }
  return c;
}

std::map<std::string, PipelineConfig> parse_configs_in(const nlohmann::json& doc,
                                                       const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw DataError("configuration document must be a JSON object");
  std::map<std::string, PipelineConfig> out;
  for (const auto& [name, body] : doc.items()) {
    try {
      out.emplace(name, parse_config(name, body, base_dir));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("configuration '" + name + "': " + e.what());
    } catch (const InvalidArgument& e) {
      throw DataError("configuration '" + name + "': " + e.what());
    }
  }
  return out;
}

}  // namespace

PipelineConfig pipeline_config_from_json(const std::string& name, const nlohmann::json& j) {
  return parse_configs_in(nlohmann::json{{name, j}}, std::filesystem::current_path()).at(name);
}

nlohmann::ordered_json to_json(const PipelineConfig& c) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(c.kind);
  nlohmann::ordered_json devices = nlohmann::ordered_json::array();
  for (const auto& d : c.devices) devices.push_back(nlohmann::ordered_json::parse(to_json(d).dump()));
  j["devices"] = devices;
  j["campaign"] = {{"mode", c.campaign.mode == CampaignMode::Fast ? "fast" : "slow"},
                   {"runs", c.campaign.n_runs},
                   {"repetitions", c.campaign.repetitions},
                   {"parallelism", c.campaign.parallelism},
                   {"batch_shots", c.campaign.batch_shots},
                   {"sub_batch", c.campaign.sub_batch},
                   {"lane_spacing_minutes", c.campaign.lane_spacing_minutes},
                   {"run_shots", c.campaign.run_shots},
                   {"interval_minutes", c.campaign.interval_minutes}};
  j["steps"] = c.steps;
  if (c.kind == ExperimentKind::TimeSeries) {
    j["windows"] = c.windows;
    j["drift_control"] = c.drift_control;
  }
  j["split"] = {{"train", c.fractions.train},
                {"validation", c.fractions.validation},
                {"test", c.fractions.test},
                {"seed", c.split_seed}};
  j["svm"] = {{"strategy", std::string(to_string(c.selection.strategy))},
              {"tol", c.selection.tol},
              {"max_passes", c.selection.max_passes},
              {"linear", c.grid.linear},
              {"poly_degrees", c.grid.poly_degrees},
              {"poly_gamma", c.grid.poly_gamma},
              {"poly_offset", c.grid.poly_offset},
              {"rbf_gammas", c.grid.rbf_gammas},
              {"c_values", c.grid.c_values}};
  return j;
}

const std::string& builtin_config_text() {
  static const std::string text(kBuiltinConfigs);
  return text;
}

std::map<std::string, PipelineConfig> parse_configs(const nlohmann::json& doc) {
  return parse_configs_in(doc, std::filesystem::current_path());
}

std::map<std::string, PipelineConfig> builtin_configs() {
  return parse_configs(nlohmann::json::parse(builtin_config_text()));
}

std::map<std::string, PipelineConfig> load_configs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open configuration file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  return parse_configs_in(doc, std::filesystem::path(path).parent_path());
}

ExperimentRow run_selection(const std::string& experiment, const LabeledDataset& dataset,
                            std::size_t skipped_groups, SplitFractions fractions,
                            std::uint64_t split_seed, const CandidateGrid& grid,
                            const SelectionOptions& options) {
  const auto s = split(dataset, fractions, split_seed);
  ExperimentRow row;
  row.experiment = experiment;
  row.steps = dataset.steps;
  row.examples = dataset.size();
  row.skipped_groups = skipped_groups;
  row.train = s.train.size();
  row.validation = s.validation.size();
  row.test = s.test.size();
  row.selection = model_select(dataset, s, expand(grid, dataset.dim()), options);
  return row;
}

PipelineResult steps_curve(const std::string& name, const LabeledDataset& dataset,
                           SplitFractions fractions, std::uint64_t split_seed,
                           const CandidateGrid& grid, const SelectionOptions& options) {
  PipelineResult result;
  result.name = name;
  const auto max_step = dataset.steps.back();
  for (std::size_t t = 1; t <= max_step; ++t) {
    const auto ds = select_steps(dataset, cumulative_steps(t));
    result.rows.push_back(run_selection("T=" + std::to_string(t), ds, 0, fractions, split_seed, grid, options));
  }
  return result;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  auto acquire = [&config](const VirtualDevice& device) {
    Campaign c = config.campaign;
    c.device = device;
    c.workers = config.selection.workers;
    return run_campaign(c);
  };

  PipelineResult result;
  result.name = config.name;
  switch (config.kind) {
    case ExperimentKind::Machines:
    case ExperimentKind::StepsCurve: {
      std::vector<std::vector<RunRecord>> records;
      for (const auto& d : config.devices) records.push_back(acquire(d));
      if (config.kind == ExperimentKind::Machines) {
        const auto built = build_machine_dataset(records, config.steps);
        result.rows.push_back(run_selection("machines", built.dataset, built.skipped_groups,
                                            config.fractions, config.split_seed, config.grid,
                                            config.selection));
      } else {
        const auto built = build_machine_dataset(records, cumulative_steps(config.steps.back()));
        auto curve = steps_curve(config.name, built.dataset, config.fractions, config.split_seed,
                                 config.grid, config.selection);
        for (auto& row : curve.rows) row.skipped_groups = built.skipped_groups;
        result.rows = std::move(curve.rows);
      }
      break;
    }
    case ExperimentKind::TimeSeries: {
      const auto& device = config.devices.front();
      auto one = [&](const std::string& label, const VirtualDevice& d) {
        const auto built = build_timeseries_dataset(acquire(d), config.steps, config.windows);
        result.rows.push_back(run_selection(label, built.dataset, built.skipped_groups,
                                            config.fractions, config.split_seed, config.grid,
                                            config.selection));
      };
      one("drift", device);
      if (config.drift_control) {
        one("no-drift", VirtualDevice(device.name, device.noise.without_drift(), device.seed));
      }
      break;
    }
  }
  return result;
}

nlohmann::ordered_json to_json(const PipelineResult& result) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : result.rows) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["steps"] = r.steps;
    j["examples"] = r.examples;
    j["skipped_groups"] = r.skipped_groups;
    j["train"] = r.train;
    j["validation"] = r.validation;
    j["test"] = r.test;
    j["selection"] = to_json(r.selection);
    rows.push_back(std::move(j));
  }
  nlohmann::ordered_json j;
  j["name"] = result.name;
  j["rows"] = std::move(rows);
  return j;
}

std::vector<SummaryRow> summarize(const PipelineResult& result) {
  std::vector<SummaryRow> rows;
  for (const auto& r : result.rows) {
    const auto& chosen = r.selection.candidates.at(r.selection.chosen);
    rows.push_back({r.experiment, r.steps, r.examples, r.train, r.validation, r.test,
                    chosen.candidate.kernel.label(), chosen.candidate.C,
                    chosen.validation_accuracy, r.selection.test_accuracy});
  }
  return rows;
}

std::vector<SummaryRow> summary_from_json(const nlohmann::json& report) {
  try {
    std::vector<SummaryRow> rows;
    for (const auto& r : report.at("rows")) {
      const auto& sel = r.at("selection");
      const auto& chosen = sel.at("chosen");
      rows.push_back({r.at("experiment").get<std::string>(),
                      r.at("steps").get<std::vector<std::size_t>>(),
                      r.at("examples").get<std::size_t>(),
                      r.at("train").get<std::size_t>(),
                      r.at("validation").get<std::size_t>(),
                      r.at("test").get<std::size_t>(),
                      chosen.at("kernel").get<std::string>(),
                      chosen.at("C").get<double>(),
                      chosen.at("validation_accuracy").get<double>(),
                      sel.at("test_accuracy").get<double>()});
    }
    return rows;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("report JSON: ") + e.what());
  }
}

std::string to_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "experiment,steps,examples,train,validation,test,kernel,C,validation_accuracy,test_accuracy\n";
  for (const auto& r : rows) {
    os << r.experiment << ',' << steps_label(r.steps) << ',' << r.examples << ',' << r.train << ','
       << r.validation << ',' << r.test << ",\"" << r.kernel << "\"," << fmt(r.C) << ','
       << fmt(r.validation_accuracy) << ',' << fmt(r.test_accuracy) << '\n';
  }
  return os.str();
}

std::string to_text(const std::string& title, const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  char line[256];
  os << title << '\n';
  std::snprintf(line, sizeof line, "%-10s %-6s %8s %-26s %8s %9s %9s\n", "experiment", "steps",
                "examples", "kernel", "C", "val_acc", "test_acc");
  os << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%-10s %-6s %8zu %-26s %8g %9.4f %9.4f\n", r.experiment.c_str(),
                  steps_label(r.steps).c_str(), r.examples, r.kernel.c_str(), r.C,
                  r.validation_accuracy, r.test_accuracy);
    os << line;
  }
  return os.str();
}

}  // namespace nfp
