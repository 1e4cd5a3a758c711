#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nfp/acquisition.hpp"
#include "nfp/error.hpp"
#include "nfp/simulator.hpp"
#include "oracles.hpp"

using namespace nfp;

namespace {

VirtualDevice make_device(double p1, double e, std::uint64_t seed, std::vector<Drift> drift = {}) {
  QubitNoise n;
  n.p1 = p1;
  n.p2 = 0.02;
  n.e01 = e;
  n.e10 = e;
  return VirtualDevice("dev", NoiseModel(n, {}, std::move(drift)), seed);
}

Campaign fast(std::size_t runs) {
  Campaign c;
  c.device = make_device(0.01, 0.02, 11);
  c.n_runs = runs;
  c.workers = 1;
  return c;
}

Campaign slow(std::size_t runs, VirtualDevice device) {
  Campaign c;
  c.mode = CampaignMode::Slow;
  c.device = std::move(device);
  c.n_runs = runs;
  c.workers = 1;
  return c;
}

}  // namespace

TEST_CASE("one FAST run yields 72 records of 1000 shots") {
  const auto records = run_fast(fast(1));
  REQUIRE(records.size() == 72);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    CHECK(r.step == i / 8 + 1);
    CHECK(r.shots == 1000);
    CHECK(r.t_hours == 0.0);
    std::uint64_t sum = 0;
    for (auto v : r.counts) sum += v;
    CHECK(sum == 1000);
    CHECK_NOTHROW(validate(r, 9));
  }
}

TEST_CASE("FAST timestamps follow the lanes") {
  Campaign c = fast(45);
  CHECK(fast_timestamp(c, 0) == 0.0);
  CHECK(fast_timestamp(c, 19) == 0.0);
  CHECK(fast_timestamp(c, 20) == doctest::Approx(0.5 / 60.0));
  CHECK(fast_timestamp(c, 44) == doctest::Approx(1.0 / 60.0));
}

TEST_CASE("SLOW timestamps are evenly spaced") {
  const auto records = run_slow(slow(60, make_device(0.01, 0.02, 3)));
  REQUIRE(records.size() == 60 * 9);
  CHECK(records.front().t_hours == 0.0);
  CHECK(records.back().t_hours == doctest::Approx(118.0 / 60.0));
  CHECK(records.back().step == 9);
  CHECK(records[9].t_hours == doctest::Approx(2.0 / 60.0));
}

TEST_CASE("campaigns are deterministic and independent of workers") {
  Campaign a = fast(3);
  Campaign b = a;
  b.workers = 4;
  const auto ra = run_fast(a);
  CHECK(ra == run_fast(a));
  CHECK(ra == run_fast(b));
  Campaign other = a;
  other.device.seed = 12;
  CHECK_FALSE(ra == run_fast(other));
}

TEST_CASE("sampled frequencies match the exact distribution") {
  Campaign c = fast(20);
  const auto records = run_fast(c);
  const auto steps = testbed_steps(3);
  std::vector<std::vector<double>> pooled(9, std::vector<double>(4, 0.0));
  for (const auto& r : records)
    for (std::size_t o = 0; o < 4; ++o) pooled[r.step - 1][o] += static_cast<double>(r.counts[o]);
  for (std::size_t s = 0; s < 9; ++s) {
    const auto d = exact_distribution(steps[s], c.device.noise);
    const double n = 20.0 * 8000.0;
    for (std::size_t o = 0; o < 4; ++o) {
      const double sigma = std::sqrt(n * d[o] * (1.0 - d[o]));
      CHECK(std::abs(pooled[s][o] - n * d[o]) <= 5.0 * sigma + 1e-9);
    }
  }
}

TEST_CASE("zero drift is stationary across campaign thirds") {
  const auto records = run_slow(slow(120, make_device(0.02, 0.03, 77)));
  for (std::size_t step = 1; step <= 9; ++step) {
    std::vector<std::vector<double>> table(3, std::vector<double>(4, 0.0));
    std::size_t run = 0;
    for (const auto& r : records) {
      if (r.step != step) continue;
      for (std::size_t o = 0; o < 4; ++o) table[run / 40][o] += static_cast<double>(r.counts[o]);
      ++run;
    }
    const auto [stat, dof] = oracle::chi_square(table);
    CAPTURE(step);
    CHECK(stat < oracle::chi_square_critical_999(dof));
  }
}

TEST_CASE("depolarizing drift raises outcome entropy over time") {
  const std::vector<Drift> drift{{NoiseParam::P1, std::nullopt, 0.05, {}},
                                 {NoiseParam::P2, std::nullopt, 0.05, {}}};
  const auto device = make_device(0.005, 0.01, 5, drift);
  const auto records = run_slow(slow(120, device));
  // mean empirical entropy over steps, averaged in blocks of 10 runs
  std::vector<double> block_entropy(12, 0.0), block_index(12);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    std::vector<double> p(4);
    for (std::size_t o = 0; o < 4; ++o) p[o] = static_cast<double>(r.counts[o]) / 1000.0;
    block_entropy[(i / 9) / 10] += oracle::entropy(p);
  }
  for (std::size_t b = 0; b < 12; ++b) block_index[b] = static_cast<double>(b);
  CHECK(oracle::spearman(block_index, block_entropy) > 0.8);

  const auto c = testbed_steps(3)[8];
  double previous = -1.0;
  for (double t : {0.0, 1.0, 2.0, 3.0, 4.0}) {
    const double h = oracle::entropy(exact_distribution(c, device.noise, t).probabilities);
    CHECK(h > previous);
    previous = h;
  }
}

TEST_CASE("records round-trip through JSONL") {
  auto records = run_fast(fast(2));
  records[3].t_hours = 0.1 + 0.2;  // not exactly representable in short decimal
  std::stringstream ss;
  write_records(ss, records);
  CHECK(read_records(ss) == records);

  const auto path = std::filesystem::temp_directory_path() / "nfp_test_records.jsonl";
  export_records(records, path.string());
  CHECK(import_records(path.string()) == records);
  std::filesystem::remove(path);
}

TEST_CASE("JSONL line layout") {
  RunRecord r{"dev-x", 2, 0.5, 10, {1, 2, 3, 4}};
  CHECK(to_jsonl_line(r) ==
        R"({"device":"dev-x","step":2,"t_hours":0.5,"shots":10,"counts":{"00":1,"01":2,"10":3,"11":4}})");
}

TEST_CASE("externally written records are accepted") {
  std::istringstream in(
      "{\"counts\": {\"11\": 3, \"00\": 7}, \"shots\": 10, \"step\": 1, \"device\": \"ext\", "
      "\"t_hours\": 0}\n\n"
      "{\"device\": \"ext\", \"step\": 2, \"t_hours\": 0.25, \"shots\": 4, "
      "\"counts\": {\"00\": 1, \"01\": 1, \"10\": 1, \"11\": 1}}\n");
  const auto records = read_records(in, "ext.jsonl");
  REQUIRE(records.size() == 2);
  CHECK(records[0].counts == Counts{7, 0, 0, 3});
  CHECK(records[1].t_hours == 0.25);
}

TEST_CASE("malformed records name the line and field") {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_records(in, "bad.jsonl");
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  const std::string good =
      R"({"device":"d","step":1,"t_hours":0,"shots":2,"counts":{"00":1,"01":1,"10":0,"11":0}})";
  const std::string bad_sum =
      R"({"device":"d","step":1,"t_hours":0,"shots":3,"counts":{"00":1,"01":1,"10":0,"11":0}})";
  const std::string m = message(good + "\n" + bad_sum + "\n");
  CHECK(m.find("bad.jsonl:2") != std::string::npos);
  CHECK(m.find("counts") != std::string::npos);
  CHECK(message("{not json\n").find("bad.jsonl:1") != std::string::npos);
  CHECK(message(R"({"device":"d","step":0,"t_hours":0,"shots":1,"counts":{"0":1,"1":0}})")
            .find("step") != std::string::npos);
  CHECK(message(R"({"device":"d","step":1,"t_hours":-1,"shots":1,"counts":{"0":1,"1":0}})")
            .find("t_hours") != std::string::npos);
  CHECK(message(R"({"device":"d","step":1,"shots":1,"counts":{"0":1,"1":0}})")
            .find("t_hours") != std::string::npos);
  CHECK(message(R"({"device":"d","step":1,"t_hours":0,"shots":1,"counts":{"0x":1}})")
            .find("counts") != std::string::npos);
}

TEST_CASE("invalid campaigns are rejected") {
  Campaign c = fast(1);
  c.sub_batch = 3000;
  CHECK_THROWS_AS(run_fast(c), InvalidArgument);
  c = fast(0);
  CHECK_THROWS_AS(run_campaign(c), InvalidArgument);
  CHECK_THROWS_AS(run_slow(fast(1)), InvalidArgument);
}
