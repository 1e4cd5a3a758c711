#include "nfp/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "nfp/acquisition.hpp"
#include "nfp/circuit.hpp"
#include "nfp/dataset.hpp"
#include "nfp/error.hpp"
#include "nfp/model_io.hpp"
#include "nfp/pipeline.hpp"
#include "nfp/selection.hpp"

namespace nfp::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

SplitFractions parse_fractions(const std::vector<double>& v) {
  if (v.size() != 3) throw UsageError("--split takes three fractions: train,validation,test");
  return {v[0], v[1], v[2]};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::string names_of(const std::map<std::string, PipelineConfig>& configs) {
  std::string s;
  for (const auto& [name, c] : configs) s += (s.empty() ? "" : ", ") + name;
  return s;
}

struct TrainFlags {
  std::vector<double> split = {0.5, 0.25, 0.25};
  std::uint64_t seed = 0;
  std::string strategy = "ovo";
  std::vector<double> c_values = CandidateGrid{}.c_values;
  std::vector<double> rbf_gammas = CandidateGrid{}.rbf_gammas;
  std::vector<int> poly_degrees = CandidateGrid{}.poly_degrees;
  bool no_linear = false;
  double tol = 1e-3;
  std::size_t max_passes = 100;
  std::size_t workers = 0;

  void add_to(CLI::App* app) {
    app->add_option("--split", split, "train,validation,test fractions")->delimiter(',')->expected(3);
    app->add_option("--seed", seed, "split seed")->required();
    app->add_option("--strategy", strategy, "multiclass reduction")->check(CLI::IsMember({"ovo", "ova"}));
    app->add_option("--c", c_values, "C grid")->delimiter(',');
    app->add_option("--rbf-gammas", rbf_gammas, "RBF gammas (0 = 1/n_features)")->delimiter(',');
    app->add_option("--poly-degrees", poly_degrees, "polynomial degrees")->delimiter(',');
    app->add_flag("--no-linear", no_linear, "drop the linear kernel");
    app->add_option("--tol", tol, "SMO KKT tolerance");
    app->add_option("--max-passes", max_passes, "SMO full-sweep budget");
    app->add_option("--workers", workers, "worker threads (0 = all cores)");
  }

  CandidateGrid grid() const {
    CandidateGrid g;
    g.linear = !no_linear;
    g.c_values = c_values;
    g.rbf_gammas = rbf_gammas;
    g.poly_degrees = poly_degrees;
    return g;
  }

  SelectionOptions options() const {
    SelectionOptions o;
    o.strategy = strategy_from_string(strategy);
    o.tol = tol;
    o.max_passes = max_passes;
    o.workers = workers;
    return o;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noise-fingerprint pipeline: testbed circuit, simulated acquisition, datasets, SVM selection"};
  app.require_subcommand(1);

  // circuit
  std::size_t repetitions = 3;
  bool show_plan = false;
  bool as_json = false;
  std::size_t step = 0;
  auto* circuit_cmd = app.add_subcommand("circuit", "print the testbed circuit");
  circuit_cmd->add_option("--repetitions", repetitions, "baseline repetitions");
  circuit_cmd->add_flag("--plan", show_plan, "also print the measurement-step cut points");
  circuit_cmd->add_flag("--json", as_json, "emit JSON instead of text");
  circuit_cmd->add_option("--step", step, "print only the prefix of this measurement step");

  // acquire
  std::string mode = "fast";
  std::string device_path;
  std::string out_path;
  Campaign campaign;
  std::optional<std::uint64_t> seed_override;
  auto* acquire_cmd = app.add_subcommand("acquire", "run a FAST or SLOW campaign on a virtual device");
  acquire_cmd->add_option("--mode", mode)->check(CLI::IsMember({"fast", "slow"}));
  acquire_cmd->add_option("--device", device_path, "device JSON")->required();
  acquire_cmd->add_option("--runs", campaign.n_runs)->required();
  acquire_cmd->add_option("--out", out_path, "records JSONL")->required();
  acquire_cmd->add_option("--repetitions", campaign.repetitions);
  acquire_cmd->add_option("--parallelism", campaign.parallelism, "FAST lanes");
  acquire_cmd->add_option("--batch-shots", campaign.batch_shots);
  acquire_cmd->add_option("--sub-batch", campaign.sub_batch);
  acquire_cmd->add_option("--lane-spacing-minutes", campaign.lane_spacing_minutes);
  acquire_cmd->add_option("--run-shots", campaign.run_shots, "SLOW shots per run");
  acquire_cmd->add_option("--interval-minutes", campaign.interval_minutes);
  acquire_cmd->add_option("--seed", seed_override, "override the device seed");
  acquire_cmd->add_option("--workers", campaign.workers);

  // dataset build / timeseries
  auto* dataset_cmd = app.add_subcommand("dataset", "build labeled datasets from records");
  dataset_cmd->require_subcommand(1);
  std::vector<std::string> machine_files;
  std::string record_file;
  std::string steps_text = "1..9";
  std::size_t windows = 2;
  std::string group_key = "time-ordinal";
  std::string dataset_out;
  auto* build_cmd = dataset_cmd->add_subcommand("build", "one class per device");
  build_cmd->add_option("--machines", machine_files, "record files, one per device")->required();
  build_cmd->add_option("--steps", steps_text, "e.g. 1..9 or 1,3,5");
  build_cmd->add_option("--group-key", group_key)->check(CLI::IsMember({"time-ordinal", "ordinal"}));
  build_cmd->add_option("--out", dataset_out, "dataset CSV")->required();
  auto* ts_cmd = dataset_cmd->add_subcommand("timeseries", "one class per time window");
  ts_cmd->add_option("--records", record_file)->required();
  ts_cmd->add_option("--windows", windows);
  ts_cmd->add_option("--steps", steps_text);
  ts_cmd->add_option("--group-key", group_key)->check(CLI::IsMember({"time-ordinal", "ordinal"}));
  ts_cmd->add_option("--out", dataset_out)->required();

  // train
  std::string dataset_in;
  std::string report_path;
  std::string model_path;
  TrainFlags train_flags;
  auto* train_cmd = app.add_subcommand("train", "split a dataset and select an SVM");
  train_cmd->add_option("--dataset", dataset_in)->required();
  train_cmd->add_option("--report", report_path, "selection report JSON")->required();
  train_cmd->add_option("--model", model_path, "write the chosen model JSON");
  train_flags.add_to(train_cmd);

  // report
  std::string report_from;
  std::string format = "csv";
  std::string report_out;
  TrainFlags report_flags;
  auto* report_cmd = app.add_subcommand("report", "accuracy-vs-steps table");
  auto* rep_ds = report_cmd->add_option("--dataset", dataset_in, "compute the steps curve of a dataset");
  auto* rep_from = report_cmd->add_option("--from", report_from, "render an existing pipeline report JSON");
  rep_ds->excludes(rep_from);
  report_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "text"}));
  report_cmd->add_option("--out", report_out, "output file (default stdout)");
  report_flags.add_to(report_cmd);
  report_cmd->get_option("--seed")->required(false);

  // reproduce
  std::string bench_name;
  std::string config_path;
  std::string out_dir;
  std::size_t workers = 0;
  auto* repro_cmd = app.add_subcommand("reproduce", "run a named end-to-end experiment");
  repro_cmd->add_option("name", bench_name, "configuration name")->required();
  repro_cmd->add_option("--config", config_path, "configuration file (default: bundled benchmarks)");
  repro_cmd->add_option("--out-dir", out_dir, "directory for report.json and report.csv");
  repro_cmd->add_option("--workers", workers);

  auto* configs_cmd = app.add_subcommand("configs", "list or print named configurations");
  std::string show_name;
  configs_cmd->add_option("--config", config_path);
  configs_cmd->add_option("--show", show_name, "print one configuration as JSON");

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("nfp");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*circuit_cmd) {
      const auto full = build_testbed(repetitions);
      const auto plan = step_plan(repetitions);
      Circuit shown = full;
      if (step != 0) {
        if (step > plan.steps()) throw UsageError("--step must be in [1, " + std::to_string(plan.steps()) + "]");
        shown = prefix(full, plan.cut_points[step - 1]);
      }
      if (as_json) {
        auto j = to_json(shown);
        if (show_plan) j["cut_points"] = plan.cut_points;
        out << j.dump(2) << '\n';
      } else {
        out << to_text(shown);
        if (show_plan) {
          out << "cut points:";
          for (std::size_t i = 0; i < plan.steps(); ++i) out << (i ? "," : " [") << plan.cut_points[i];
          out << "]\n";
        }
      }
      return kOk;
    }

    if (*acquire_cmd) {
      campaign.mode = mode == "fast" ? CampaignMode::Fast : CampaignMode::Slow;
      campaign.device = load_device(device_path);
      if (seed_override) campaign.device.seed = *seed_override;
      const auto records = run_campaign(campaign);
      export_records(records, out_path);
      out << "wrote " << records.size() << " records to " << out_path << '\n';
      return kOk;
    }

    if (*dataset_cmd) {
      const auto steps = parse_steps(steps_text);
      const auto key = group_key == "ordinal" ? GroupKey::Ordinal : GroupKey::TimeOrdinal;
      BuildResult built;
      if (*build_cmd) {
        std::vector<std::vector<RunRecord>> by_device;
        for (const auto& f : machine_files) by_device.push_back(import_records(f));
        built = build_machine_dataset(by_device, steps, key);
        built.dataset.provenance["sources"] = machine_files;
      } else {
        built = build_timeseries_dataset(import_records(record_file), steps, windows, key);
        built.dataset.provenance["sources"] = std::vector<std::string>{record_file};
      }
      write_dataset(built.dataset, dataset_out);
      out << "wrote " << built.dataset.size() << " examples (dim " << built.dataset.dim() << ", "
          << built.dataset.n_classes() << " classes, " << built.skipped_groups
          << " incomplete groups skipped) to " << dataset_out << '\n';
      return kOk;
    }

    if (*train_cmd) {
      const auto ds = read_dataset(dataset_in);
      PipelineResult result;
      result.name = dataset_in;
      result.rows.push_back(run_selection("train", ds, 0, parse_fractions(train_flags.split),
                                          train_flags.seed, train_flags.grid(),
                                          train_flags.options()));
      auto j = to_json(result);
      j["class_names"] = ds.class_names;
      write_text(report_path, j.dump(2) + "\n");
      const auto& report = result.rows.front().selection;
      if (!model_path.empty()) save_model(report.model, ds.class_names, model_path);
      const auto& chosen = report.candidates[report.chosen];
      out << "chosen " << chosen.candidate.kernel.label() << " C=" << chosen.candidate.C
          << " validation=" << chosen.validation_accuracy << " test=" << report.test_accuracy << '\n';
      return kOk;
    }

    if (*report_cmd) {
      std::string title;
      std::vector<SummaryRow> rows;
      if (!report_from.empty()) {
        std::ifstream in(report_from);
        if (!in) throw DataError("cannot open '" + report_from + "'");
        nlohmann::json j;
        try {
          in >> j;
        } catch (const nlohmann::json::exception& e) {
          throw DataError(report_from + ": " + e.what());
        }
        title = j.value("name", report_from);
        rows = summary_from_json(j);
      } else if (!dataset_in.empty()) {
        const auto ds = read_dataset(dataset_in);
        const auto curve = steps_curve(dataset_in, ds, parse_fractions(report_flags.split),
                                       report_flags.seed, report_flags.grid(), report_flags.options());
        title = curve.name;
        rows = summarize(curve);
      } else {
        throw UsageError("report needs --dataset or --from");
      }
      const std::string text = format == "csv" ? to_csv(rows) : to_text(title, rows);
      if (report_out.empty()) {
        out << text;
      } else {
        write_text(report_out, text);
      }
      return kOk;
    }

    if (*repro_cmd || *configs_cmd) {
      const auto configs = config_path.empty() ? builtin_configs() : load_configs(config_path);
      if (*configs_cmd) {
        if (show_name.empty()) {
          for (const auto& [name, c] : configs) out << name << '\n';
        } else {
          auto it = configs.find(show_name);
          if (it == configs.end()) {
            throw UsageError("unknown configuration '" + show_name + "'; available: " + names_of(configs));
          }
          out << to_json(it->second).dump(2) << '\n';
        }
        return kOk;
      }
      auto it = configs.find(bench_name);
      if (it == configs.end()) {
        throw UsageError("unknown configuration '" + bench_name + "'; available: " + names_of(configs));
      }
      PipelineConfig config = it->second;
      config.selection.workers = workers;
      const auto result = run_pipeline(config);
      const std::filesystem::path dir = out_dir.empty() ? "reproduce-" + bench_name : out_dir;
      std::filesystem::create_directories(dir);
      write_text((dir / "report.json").string(), to_json(result).dump(2) + "\n");
      write_text((dir / "report.csv").string(), to_csv(result));
      out << to_text(result);
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const InvalidArgument& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace nfp::cli
