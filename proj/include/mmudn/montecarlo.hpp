#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmudn/channel.hpp"
#include "mmudn/geometry.hpp"

namespace mmudn {

/// Ergodic SE estimate E[ln(1 + SIR)] at the probe, nats/s/Hz.
struct SeEstimate {
  Link link = Link::kMuwDl;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_zero_samples = 0;  ///< mmW samples with a non-LOS serving link
  std::size_t n_capped = 0;        ///< samples limited to the ln(1 + SIR) ceiling
};

struct ExperimentPlan {
  DensityConfig densities;
  ChannelConfig channel;
  std::optional<Window> window;  ///< nullopt: sized from the densities
  std::uint64_t seed = 1;
  std::size_t n_realizations = 10000;
  std::vector<Link> links{kAllLinks.begin(), kAllLinks.end()};
  double cap_nats = 50.0;
  SamplingMode sampling = SamplingMode::kLazyCells;
  ProbeScheduling probe_scheduling = ProbeScheduling::kForced;
  unsigned threads = 0;  ///< 0: hardware concurrency

  void validate() const;
};

struct SeReport {
  std::map<Link, SeEstimate> estimates;
  std::vector<std::string> warnings;
  Window window;
};

/// Half-width 20 / sqrt(pi lambda_min), i.e. twenty typical inter-point spacings of the
/// sparsest process.
Window default_window(const DensityConfig& densities);

/// Runs plan.n_realizations independent realizations (concurrently, each from its own
/// substream) and reduces them in realization order, so results are bit-identical for any
/// thread count. Throws NumericalFailure if a requested link collects no samples.
SeReport estimate_se(const ExperimentPlan& plan);

struct SweepRow {
  double lambda_hat = 0.0;
  SeEstimate estimate;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double asymptote = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<std::string> warnings;
};

/// For each lambda_hat (nondecreasing, positive) sets lambda_m = lambda_mu = lambda_hat
/// lambda_u, estimates every planned link, and attaches the bounds and the asymptote of
/// its tier. Rows are ordered by lambda_hat, then by link.
SweepResult convergence_sweep(const ExperimentPlan& base, const std::vector<double>& lambda_hats);

}  // namespace mmudn
