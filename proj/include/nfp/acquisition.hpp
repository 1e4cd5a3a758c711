#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nfp/noise_model.hpp"
#include "nfp/sampling.hpp"

namespace nfp {

/// Shot counts of one execution of one measurement step.
struct RunRecord {
  std::string device;
  std::size_t step = 1;  // 1-based measurement step
  double t_hours = 0.0;  // since campaign start
  std::uint64_t shots = 0;
  Counts counts;         // indexed by outcome, see outcome_label()

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Throws DataError if the record breaks an invariant. max_step 0 = unchecked.
void validate(const RunRecord& record, std::size_t max_step = 0);

enum class CampaignMode { Fast, Slow };

struct Campaign {
  CampaignMode mode = CampaignMode::Fast;
  VirtualDevice device{"device", NoiseModel{}, 0};
  std::size_t repetitions = 3;
  std::size_t n_runs = 1;
  // FAST: `parallelism` lanes each submit runs `lane_spacing_minutes` apart;
  // every run is `batch_shots` shots split into records of `sub_batch`.
  std::size_t parallelism = 20;
  std::uint64_t batch_shots = 8000;
  std::uint64_t sub_batch = 1000;
  double lane_spacing_minutes = 0.5;
  // SLOW: one `run_shots` run every `interval_minutes`.
  std::uint64_t run_shots = 1000;
  double interval_minutes = 2.0;
  // Worker threads for sampling (0 = hardware concurrency). Output does not
  // depend on it.
  std::size_t workers = 0;
};

/// Timestamp (hours) of FAST run k.
double fast_timestamp(const Campaign& campaign, std::size_t run);
/// Timestamp (hours) of SLOW run k.
double slow_timestamp(const Campaign& campaign, std::size_t run);

/// Records ordered by (run, step, sub-batch).
std::vector<RunRecord> run_fast(const Campaign& campaign);
/// Records ordered by (run, step).
std::vector<RunRecord> run_slow(const Campaign& campaign);
/// Dispatches on campaign.mode.
std::vector<RunRecord> run_campaign(const Campaign& campaign);

std::string to_jsonl_line(const RunRecord& record);
void write_records(std::ostream& out, const std::vector<RunRecord>& records);
/// `source` names the stream in error messages.
std::vector<RunRecord> read_records(std::istream& in, const std::string& source = "<stream>");

void export_records(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> import_records(const std::string& path);

}  // namespace nfp
