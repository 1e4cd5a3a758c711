#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nfp/simulator.hpp"

namespace nfp {

/**
 * Deterministic random stream. Streams for parallel work are derived from
 * (seed, run, step) so results do not depend on execution order.
 */
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);
  static RngStream derive(std::uint64_t seed, std::uint64_t run, std::uint64_t step);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

using Counts = std::vector<std::uint64_t>;

/// `shots` independent outcome indices drawn from `dist`.
std::vector<std::uint32_t> sample_outcomes(const OutcomeDistribution& dist, std::uint64_t shots,
                                           RngStream& rng);

/// Multinomial counts of `shots` draws; counts.size() == dist.size().
Counts sample_counts(const OutcomeDistribution& dist, std::uint64_t shots, RngStream& rng);

/// Tally outcome indices into counts over `n_outcomes` bins.
Counts tally(const std::uint32_t* first, const std::uint32_t* last, std::size_t n_outcomes);

}  // namespace nfp
