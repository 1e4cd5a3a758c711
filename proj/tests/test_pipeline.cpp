#include <doctest.h>

#include <fstream>
#include <sstream>

#include "nfp/error.hpp"
#include "nfp/pipeline.hpp"

using namespace nfp;

namespace {

PipelineConfig small(const std::string& name, std::size_t runs) {
  PipelineConfig c = builtin_configs().at(name);
  c.campaign.n_runs = runs;
  c.grid.c_values = {1.0, 10.0};
  c.selection.workers = 1;
  return c;
}

}  // namespace

TEST_CASE("bundled configuration file matches the built-in set") {
  std::ifstream in(std::string(NFP_SOURCE_DIR) + "/configs/benchmarks.json");
  REQUIRE(in);
  const auto file = nlohmann::json::parse(in);
  CHECK(file == nlohmann::json::parse(builtin_config_text()));
}

TEST_CASE("built-in configurations") {
  const auto configs = builtin_configs();
  REQUIRE(configs.size() == 4);
  const auto& two = configs.at("two-device");
  CHECK(two.kind == ExperimentKind::Machines);
  CHECK(two.devices.size() == 2);
  CHECK(two.steps == cumulative_steps(9));
  CHECK(two.campaign.mode == CampaignMode::Fast);
  CHECK(two.split_seed == 7);
  CHECK(two.devices[0].noise.at(0).p1 == 0.005);
  CHECK(two.devices[1].noise.at(0).e01 == 0.04);
  CHECK(configs.at("multi-device").devices.size() == 4);
  const auto& drift = configs.at("time-drift");
  CHECK(drift.kind == ExperimentKind::TimeSeries);
  CHECK(drift.campaign.mode == CampaignMode::Slow);
  CHECK(drift.drift_control);
  // 121 runs at 2 minutes span four hours
  CHECK(slow_timestamp(drift.campaign, drift.campaign.n_runs - 1) == doctest::Approx(4.0));
}

TEST_CASE("configuration json round trip") {
  for (const auto& [name, config] : builtin_configs()) {
    const auto j = nlohmann::json::parse(to_json(config).dump());
    const PipelineConfig back = pipeline_config_from_json(name, j);
    CHECK(back.devices == config.devices);
    CHECK(back.steps == config.steps);
    CHECK(back.campaign.n_runs == config.campaign.n_runs);
    CHECK(back.split_seed == config.split_seed);
    CHECK(to_json(back) == to_json(config));
  }
}

TEST_CASE("configuration errors") {
  auto parse = [](const char* text) {
    return pipeline_config_from_json("x", nlohmann::json::parse(text));
  };
  CHECK_THROWS(parse(R"({"kind": "machines", "devices": []})"));
  CHECK_THROWS(parse(R"({"kind": "nope"})"));
  CHECK_THROWS(parse(R"({"kind": "machines", "devices": [{"file": "/nonexistent/dev.json"}],
                         "split": {"seed": 1}})"));
}

TEST_CASE("small machine pipeline") {
  const auto result = run_pipeline(small("two-device", 2));
  REQUIRE(result.rows.size() == 1);
  const auto& row = result.rows[0];
  CHECK(row.examples == 32);
  CHECK(row.train + row.validation + row.test == 32);
  CHECK(row.selection.candidates.size() == 14);

  const auto rows = summarize(result);
  const auto from_json = summary_from_json(nlohmann::json::parse(to_json(result).dump()));
  CHECK(to_csv(from_json) == to_csv(rows));
  const std::string csv = to_csv(result);
  CHECK(csv.rfind("experiment,steps,examples,train,validation,test,kernel,C,"
                  "validation_accuracy,test_accuracy\n", 0) == 0);
  CHECK(csv.find("machines,1..9,32,") != std::string::npos);
  CHECK(to_text(result).find("machines") != std::string::npos);
}

TEST_CASE("small steps curve") {
  const auto result = run_pipeline(small("steps-curve", 2));
  REQUIRE(result.rows.size() == 9);
  for (std::size_t t = 0; t < 9; ++t) {
    CHECK(result.rows[t].experiment == "T=" + std::to_string(t + 1));
    CHECK(result.rows[t].steps == cumulative_steps(t + 1));
  }
}

TEST_CASE("small time-series pipeline with control") {
  PipelineConfig c = small("time-drift", 30);
  const auto result = run_pipeline(c);
  REQUIRE(result.rows.size() == 2);
  CHECK(result.rows[0].experiment == "drift");
  CHECK(result.rows[1].experiment == "no-drift");
  CHECK(result.rows[0].examples == 30);
}

TEST_CASE("pipeline runs are reproducible") {
  const auto a = to_json(run_pipeline(small("two-device", 1))).dump();
  const auto b = to_json(run_pipeline(small("two-device", 1))).dump();
  CHECK(a == b);
}
