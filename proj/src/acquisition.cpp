#include "nfp/acquisition.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "nfp/circuit.hpp"
#include "nfp/error.hpp"
#include "nfp/parallel.hpp"
#include "nfp/simulator.hpp"

namespace nfp {

namespace {

void check_common(const Campaign& c) {
  if (c.repetitions == 0) throw InvalidArgument("repetitions must be >= 1");
  if (c.n_runs == 0) throw InvalidArgument("n_runs must be >= 1");
}

// Exact step distributions at one timestamp.
std::vector<OutcomeDistribution> step_distributions(const std::vector<Circuit>& steps,
                                                    const NoiseModel& noise, double t) {
  std::vector<OutcomeDistribution> out;
  out.reserve(steps.size());
  for (const auto& c : steps) out.push_back(exact_distribution(c, noise, t));
  return out;
}

}  // namespace

void validate(const RunRecord& r, std::size_t max_step) {
  if (r.device.empty()) throw DataError("field 'device': empty device name");
  if (r.step == 0 || (max_step != 0 && r.step > max_step)) {
    throw DataError("field 'step': " + std::to_string(r.step) + " outside the step plan");
  }
  if (!std::isfinite(r.t_hours) || r.t_hours < 0.0) {
    throw DataError("field 't_hours': must be finite and >= 0");
  }
  if (r.shots == 0) throw DataError("field 'shots': must be >= 1");
  if (r.counts.size() < 2 || !std::has_single_bit(r.counts.size())) {
    throw DataError("field 'counts': outcome count must be a power of two >= 2");
  }
  std::uint64_t total = 0;
  for (auto c : r.counts) total += c;
  if (total != r.shots) {
    throw DataError("field 'counts': sum " + std::to_string(total) + " != shots " +
                    std::to_string(r.shots));
  }
}

double fast_timestamp(const Campaign& c, std::size_t run) {
  const auto lanes = std::max<std::size_t>(c.parallelism, 1);
  return static_cast<double>(run / lanes) * c.lane_spacing_minutes / 60.0;
}

double slow_timestamp(const Campaign& c, std::size_t run) {
  return static_cast<double>(run) * c.interval_minutes / 60.0;
}

std::vector<RunRecord> run_fast(const Campaign& c) {
  if (c.mode != CampaignMode::Fast) throw InvalidArgument("run_fast needs a FAST campaign");
  check_common(c);
  if (c.parallelism == 0) throw InvalidArgument("parallelism must be >= 1");
  if (c.sub_batch == 0 || c.batch_shots == 0 || c.batch_shots % c.sub_batch != 0) {
    throw InvalidArgument("batch_shots must be a positive multiple of sub_batch");
  }
  const auto steps = testbed_steps(c.repetitions);
  const auto n_sub = c.batch_shots / c.sub_batch;

  // Runs on the same slot share a timestamp and hence a distribution.
  const std::size_t n_slots = (c.n_runs + c.parallelism - 1) / c.parallelism;
  std::vector<std::vector<OutcomeDistribution>> dists(n_slots);
  parallel_for(n_slots, c.workers, [&](std::size_t slot) {
    dists[slot] = step_distributions(steps, c.device.noise, fast_timestamp(c, slot * c.parallelism));
  });

  std::vector<std::vector<RunRecord>> per_run(c.n_runs);
  parallel_for(c.n_runs, c.workers, [&](std::size_t run) {
    const double t = fast_timestamp(c, run);
    auto& out = per_run[run];
    for (std::size_t s = 0; s < steps.size(); ++s) {
      const auto& dist = dists[run / c.parallelism][s];
      auto rng = RngStream::derive(c.device.seed, run, s + 1);
      const auto outcomes = sample_outcomes(dist, c.batch_shots, rng);
      for (std::uint64_t b = 0; b < n_sub; ++b) {
        const auto* first = outcomes.data() + b * c.sub_batch;
        out.push_back({c.device.name, s + 1, t, c.sub_batch,
                       tally(first, first + c.sub_batch, dist.size())});
      }
    }
  });

  std::vector<RunRecord> records;
  records.reserve(c.n_runs * steps.size() * n_sub);
  for (auto& run : per_run) {
    for (auto& r : run) records.push_back(std::move(r));
  }
  return records;
}

std::vector<RunRecord> run_slow(const Campaign& c) {
  if (c.mode != CampaignMode::Slow) throw InvalidArgument("run_slow needs a SLOW campaign");
  check_common(c);
  if (c.run_shots == 0) throw InvalidArgument("run_shots must be >= 1");
  if (!(c.interval_minutes > 0.0)) throw InvalidArgument("interval_minutes must be > 0");
  const auto steps = testbed_steps(c.repetitions);

  std::vector<std::vector<RunRecord>> per_run(c.n_runs);
  parallel_for(c.n_runs, c.workers, [&](std::size_t run) {
    const double t = slow_timestamp(c, run);
    const auto dists = step_distributions(steps, c.device.noise, t);
    for (std::size_t s = 0; s < steps.size(); ++s) {
      auto rng = RngStream::derive(c.device.seed, run, s + 1);
      per_run[run].push_back(
          {c.device.name, s + 1, t, c.run_shots, sample_counts(dists[s], c.run_shots, rng)});
    }
  });

  std::vector<RunRecord> records;
  records.reserve(c.n_runs * steps.size());
  for (auto& run : per_run) {
    for (auto& r : run) records.push_back(std::move(r));
  }
  return records;
}

std::vector<RunRecord> run_campaign(const Campaign& campaign) {
  return campaign.mode == CampaignMode::Fast ? run_fast(campaign) : run_slow(campaign);
}

std::string to_jsonl_line(const RunRecord& r) {
  const auto n_bits = static_cast<std::size_t>(std::countr_zero(r.counts.size()));
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (std::size_t o = 0; o < r.counts.size(); ++o) counts[outcome_label(o, n_bits)] = r.counts[o];
  nlohmann::ordered_json j;
  j["device"] = r.device;
  j["step"] = r.step;
  j["t_hours"] = r.t_hours;
  j["shots"] = r.shots;
  j["counts"] = std::move(counts);
  return j.dump();
}

void write_records(std::ostream& out, const std::vector<RunRecord>& records) {
  for (const auto& r : records) out << to_jsonl_line(r) << '\n';
}

namespace {

RunRecord parse_record(const nlohmann::json& j) {
  auto field = [&j](const char* name) -> const nlohmann::json& {
    if (!j.contains(name)) throw DataError(std::string("field '") + name + "': missing");
    return j.at(name);
  };
  RunRecord r;
  const auto& device = field("device");
  if (!device.is_string()) throw DataError("field 'device': expected a string");
  r.device = device.get<std::string>();

  const auto& step = field("step");
  if (!step.is_number_integer() || step.get<std::int64_t>() < 1) {
    throw DataError("field 'step': expected a positive integer");
  }
  r.step = step.get<std::size_t>();

  const auto& t = field("t_hours");
  if (!t.is_number()) throw DataError("field 't_hours': expected a number");
  r.t_hours = t.get<double>();

  const auto& shots = field("shots");
  if (!shots.is_number_integer() || shots.get<std::int64_t>() < 1) {
    throw DataError("field 'shots': expected a positive integer");
  }
  r.shots = shots.get<std::uint64_t>();

  const auto& counts = field("counts");
  if (!counts.is_object() || counts.empty()) throw DataError("field 'counts': expected an object");
  std::size_t width = 0;
  std::map<std::size_t, std::uint64_t> by_outcome;
  for (const auto& [label, value] : counts.items()) {
    if (width == 0) width = label.size();
    if (label.size() != width) throw DataError("field 'counts': mixed outcome widths");
    std::size_t idx = 0;
    try {
      idx = outcome_index(label);
    } catch (const InvalidArgument&) {
      throw DataError("field 'counts': bad outcome label '" + label + "'");
    }
    if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
      throw DataError("field 'counts': entry '" + label + "' must be a non-negative integer");
    }
    by_outcome[idx] = value.get<std::uint64_t>();
  }
  // Outcomes absent from an external file count as zero.
  r.counts.assign(std::size_t{1} << width, 0);
  for (const auto& [idx, v] : by_outcome) r.counts[idx] = v;
  validate(r);
  return r;
}

}  // namespace

std::vector<RunRecord> read_records(std::istream& in, const std::string& source) {
  std::vector<RunRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + "invalid JSON (" + e.what() + ")");
    }
    if (!j.is_object()) throw DataError(where + "expected a JSON object");
    try {
      records.push_back(parse_record(j));
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
  }
  return records;
}

void export_records(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  write_records(out, records);
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<RunRecord> import_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_records(in, path);
}

}  // namespace nfp
