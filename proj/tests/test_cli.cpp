#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nfp/circuit.hpp"
#include "nfp/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = nfp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

const std::string kDevices = std::string(NFP_SOURCE_DIR) + "/configs/devices/";

struct Scratch {
  fs::path dir;
  Scratch() : dir(fs::current_path() / "cli_scratch") {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == nfp::cli::kUsage);
  CHECK(run({"--help"}).code == nfp::cli::kOk);
  CHECK(run({"circuit", "--bogus"}).code == nfp::cli::kUsage);
  CHECK(run({"acquire", "--mode", "medium", "--device", "x", "--runs", "1", "--out", "y"}).code ==
        nfp::cli::kUsage);
  CHECK(run({"train", "--dataset", "x.csv", "--report", "r.json"}).code == nfp::cli::kUsage);
  const auto r = run({"reproduce", "no-such-benchmark"});
  CHECK(r.code == nfp::cli::kUsage);
  CHECK(r.err.find("two-device") != std::string::npos);
}

TEST_CASE("circuit listing and plan") {
  const auto r = run({"circuit", "--plan"});
  CHECK(r.code == 0);
  CHECK(r.out.find("cut points: [3,5,7,10,12,14,17,19,21]") != std::string::npos);
  CHECK(r.out.find("  7: Toffoli q0,q1 -> q2") != std::string::npos);

  const auto j = run({"circuit", "--json"});
  CHECK(nlohmann::json::parse(j.out) == nfp::to_json(nfp::build_testbed(3)));

  const auto step = run({"circuit", "--step", "1"});
  CHECK(step.out.find("3 gates") != std::string::npos);
  CHECK(run({"circuit", "--step", "10"}).code == nfp::cli::kUsage);
}

TEST_CASE("end-to-end through files") {
  Scratch s;
  auto acquire = [&](const std::string& device, const std::string& out) {
    return run({"acquire", "--mode", "fast", "--device", kDevices + device, "--runs", "2",
                "--out", out, "--workers", "1"});
  };
  REQUIRE(acquire("device-a.json", s / "a.jsonl").code == 0);
  REQUIRE(acquire("device-b.json", s / "b.jsonl").code == 0);
  REQUIRE(acquire("device-a.json", s / "a2.jsonl").code == 0);
  CHECK(slurp(s / "a.jsonl") == slurp(s / "a2.jsonl"));

  const auto built = run({"dataset", "build", "--machines", s / "a.jsonl", s / "b.jsonl", "--out",
                          s / "ds.csv"});
  REQUIRE(built.code == 0);
  CHECK(built.out.find("32 examples") != std::string::npos);
  CHECK(fs::exists(s / "ds.json"));

  const auto trained = run({"train", "--dataset", s / "ds.csv", "--report", s / "r.json", "--seed",
                            "3", "--model", s / "m.json", "--c", "1,10"});
  REQUIRE(trained.code == 0);
  CHECK(trained.out.rfind("chosen ", 0) == 0);
  const auto report = nlohmann::json::parse(slurp(s / "r.json"));
  CHECK(report["rows"][0]["selection"]["candidates"].size() == 14);
  CHECK(fs::exists(s / "m.json"));

  const auto csv = run({"report", "--from", s / "r.json", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.find("train,1..9,32,16,8,8,") != std::string::npos);

  const auto curve = run({"report", "--dataset", s / "ds.csv", "--format", "csv", "--c", "1"});
  CHECK(curve.code == 0);
  CHECK(std::count(curve.out.begin(), curve.out.end(), '\n') == 10);
}

TEST_CASE("time-series dataset command") {
  Scratch s;
  REQUIRE(run({"acquire", "--mode", "slow", "--device", kDevices + "device-drift.json", "--runs",
               "20", "--out", s / "drift.jsonl"})
              .code == 0);
  const auto r = run({"dataset", "timeseries", "--records", s / "drift.jsonl", "--windows", "2",
                      "--out", s / "ts.csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("20 examples") != std::string::npos);
}

TEST_CASE("data errors exit with 3 and name the location") {
  Scratch s;
  {
    std::ofstream out(s / "bad.jsonl");
    out << R"({"device":"d","step":1,"t_hours":0,"shots":5,"counts":{"00":1,"01":1,"10":1,"11":1}})"
        << '\n';
  }
  const auto r = run({"dataset", "build", "--machines", s / "bad.jsonl", s / "bad.jsonl", "--out",
                      s / "x.csv"});
  CHECK(r.code == nfp::cli::kData);
  CHECK(r.err.find("bad.jsonl:1") != std::string::npos);
  CHECK(r.err.find("counts") != std::string::npos);

  CHECK(run({"train", "--dataset", s / "missing.csv", "--report", s / "r.json", "--seed", "1"})
            .code == nfp::cli::kData);
  CHECK(run({"acquire", "--mode", "fast", "--device", s / "missing.json", "--runs", "1", "--out",
             s / "o.jsonl"})
            .code == nfp::cli::kData);
}

TEST_CASE("configuration listing") {
  const auto r = run({"configs"});
  CHECK(r.code == 0);
  for (const char* name : {"two-device", "steps-curve", "multi-device", "time-drift"})
    CHECK(r.out.find(name) != std::string::npos);
  const auto shown = run({"configs", "--show", "time-drift"});
  CHECK(shown.code == 0);
  CHECK(nlohmann::json::parse(shown.out)["kind"] == "timeseries");
  CHECK(run({"configs", "--show", "nope"}).code == nfp::cli::kUsage);
}

TEST_CASE("reproduce with a custom configuration file") {
  Scratch s;
  auto doc = nlohmann::json::parse(slurp(std::string(NFP_SOURCE_DIR) + "/configs/benchmarks.json"));
  auto small = doc["two-device"];
  small["campaign"]["runs"] = 1;
  small["devices"] = nlohmann::json::array(
      {{{"file", kDevices + "device-a.json"}}, {{"file", kDevices + "device-b.json"}}});
  nlohmann::json custom;
  custom["tiny"] = small;
  {
    std::ofstream out(s / "tiny.json");
    out << custom.dump(2);
  }
  const auto r = run({"reproduce", "tiny", "--config", s / "tiny.json", "--out-dir", s / "out",
                      "--workers", "1"});
  CHECK(r.code == 0);
  CHECK(fs::exists(s / "out/report.json"));
  CHECK(slurp(s / "out/report.csv").find("machines,1..9,16,") != std::string::npos);
}
