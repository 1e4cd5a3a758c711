#include "nfp/sampling.hpp"

#include "nfp/error.hpp"

namespace nfp {

namespace {

std::uint64_t lo32(std::uint64_t v) { return v & 0xffffffffULL; }
std::uint64_t hi32(std::uint64_t v) { return v >> 32; }

}  // namespace

RngStream::RngStream(std::uint64_t seed) {
  std::seed_seq seq{lo32(seed), hi32(seed)};
  engine_.seed(seq);
}

RngStream RngStream::derive(std::uint64_t seed, std::uint64_t run, std::uint64_t step) {
  RngStream s(0);
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(run), hi32(run), lo32(step), hi32(step)};
  s.engine_.seed(seq);
  return s;
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<std::uint32_t> sample_outcomes(const OutcomeDistribution& dist, std::uint64_t shots,
                                           RngStream& rng) {
  if (shots == 0) throw InvalidArgument("shots must be >= 1");
  if (dist.size() == 0) throw InvalidArgument("empty outcome distribution");
  std::vector<double> cdf(dist.size());
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (!(dist[i] >= 0.0)) throw InvalidArgument("negative outcome probability");
    acc += dist[i];
    cdf[i] = acc;
    if (dist[i] > 0.0) last_nonzero = i;
  }
  if (!(acc > 0.0)) throw InvalidArgument("outcome distribution has zero mass");

  std::vector<std::uint32_t> out(shots);
  for (auto& o : out) {
    const double u = rng.uniform() * acc;
    std::size_t i = 0;
    while (i < cdf.size() && !(u < cdf[i])) ++i;
    // Rounding can push u past the final cumulative sum.
    if (i >= cdf.size()) i = last_nonzero;
    o = static_cast<std::uint32_t>(i);
  }
  return out;
}

Counts tally(const std::uint32_t* first, const std::uint32_t* last, std::size_t n_outcomes) {
  Counts counts(n_outcomes, 0);
  for (auto it = first; it != last; ++it) ++counts.at(*it);
  return counts;
}

Counts sample_counts(const OutcomeDistribution& dist, std::uint64_t shots, RngStream& rng) {
  const auto outcomes = sample_outcomes(dist, shots, rng);
  return tally(outcomes.data(), outcomes.data() + outcomes.size(), dist.size());
}

}  // namespace nfp
