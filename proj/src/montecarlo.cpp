#include "mmudn/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "mmudn/analytic.hpp"
#include "mmudn/error.hpp"

namespace mmudn {

namespace {

enum FadeStream : std::uint64_t { kServingFade = 16, kInterfererFade = 32 };

/// Outcome of one link in one realization.
struct Draw {
  double value = 0.0;  ///< ln(1 + SIR), after capping
  bool present = false;
  bool zero = false;
  bool capped = false;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

std::vector<Draw> run_realization(const ExperimentPlan& plan, const DeploymentOptions& options,
                                  std::uint64_t realization) {
  const Deployment dep = sample_deployment(options, plan.seed, realization);
  std::vector<Draw> draws(plan.links.size());

  // The probe's serving fade is shared by the DL and UL evaluation of a tier; interferer
  // fades come from per-link streams so a link's samples do not depend on which other
  // links were requested.
  const auto serving_fade = [&](Tier t) {
    Rng rng(substream_key(plan.seed, {realization, kServingFade, static_cast<std::uint64_t>(t)}));
    return exponential_fade(rng);
  };
  const double fade_m = serving_fade(Tier::kMmw);
  const double fade_mu = serving_fade(Tier::kMuw);

  for (std::size_t i = 0; i < plan.links.size(); ++i) {
    const Link link = plan.links[i];
    const Tier tier = tier_of(link);
    if (dep.tier(tier).assoc.empty()) continue;
    if (options.probe_scheduling == ProbeScheduling::kConditioned && !dep.probe_scheduled(tier)) {
      continue;
    }
    const LinkGeometry geom = link_geometry(dep, link, plan.channel);
    Rng rng(substream_key(plan.seed,
                          {realization, kInterfererFade, static_cast<std::uint64_t>(link)}));
    std::vector<double> fades(geom.interferer_distances.size());
    for (double& f : fades) f = exponential_fade(rng);
    const SirSample s =
        evaluate_sir(geom, plan.channel, tier == Tier::kMmw ? fade_m : fade_mu, fades);

    Draw& d = draws[i];
    d.present = true;
    d.zero = s.blocked;
    const double se = s.infinite ? plan.cap_nats : std::log1p(s.value);
    d.capped = se >= plan.cap_nats;
    d.value = std::min(se, plan.cap_nats);
  }
  return draws;
}

std::string format_count(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

}  // namespace

void ExperimentPlan::validate() const {
  densities.validate();
  channel.validate();
  if (window) window->validate();
  require(n_realizations >= 1, "n_realizations must be >= 1");
  require(!links.empty(), "no links requested");
  require(cap_nats > 0.0, "SE cap must be positive");
}

Window default_window(const DensityConfig& densities) {
  densities.validate();
  const double lambda_min = std::min({densities.lambda_m, densities.lambda_mu, densities.lambda_u});
  return Window{20.0 / std::sqrt(std::numbers::pi * lambda_min), true};
}

SeReport estimate_se(const ExperimentPlan& plan) {
  plan.validate();
  SeReport report;
  report.window = plan.window.value_or(default_window(plan.densities));

  const double area = report.window.area();
  for (auto [name, density] : {std::pair{"mmW BS", plan.densities.lambda_m},
                               std::pair{"uW BS", plan.densities.lambda_mu},
                               std::pair{"user", plan.densities.lambda_u}}) {
    if (density * area < 10.0) {
      report.warnings.push_back(std::string("window too small: expected ") + name + " count " +
                                format_count(density * area) + " < 10");
    }
  }
  // Share of mean interference from beyond the window edge, relative to the typical
  // interferer distance 1 / sqrt(pi lambda_u).
  const double r0 = 1.0 / std::sqrt(std::numbers::pi * plan.densities.lambda_u);
  for (Tier t : {Tier::kMmw, Tier::kMuw}) {
    // LOS gating already drops every mmW interferer past r_l
    if (t == Tier::kMmw && plan.channel.los.r_l <= report.window.half_width) continue;
    const double truncated = std::pow(r0 / report.window.half_width, plan.channel.alpha(t) - 2.0);
    if (truncated > 1e-3) {
      report.warnings.push_back(std::string(t == Tier::kMmw ? "mmW" : "uW") +
                                " interference truncated by the window: about " +
                                format_count(100.0 * truncated) + "% of the mean is missing");
    }
  }

  DeploymentOptions options;
  options.densities = plan.densities;
  options.window = report.window;
  options.mode = plan.sampling;
  options.probe_scheduling = plan.probe_scheduling;

  const std::size_t n = plan.n_realizations;
  std::vector<std::vector<Draw>> draws(n);
  unsigned threads = plan.threads ? plan.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  const auto worker = [&] {
    try {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        draws[i] = run_realization(plan, options, i);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::size_t no_bs = 0;
  for (std::size_t k = 0; k < plan.links.size(); ++k) {
    SeEstimate est;
    est.link = plan.links[k];
    CompensatedSum sum;
    for (std::size_t i = 0; i < n; ++i) {
      const Draw& d = draws[i][k];
      if (!d.present) continue;
      ++est.n_samples;
      est.n_zero_samples += d.zero;
      est.n_capped += d.capped;
      sum.add(d.value);
    }
    if (est.n_samples == 0) {
      throw NumericalFailure("no samples collected for link " + std::string(link_name(est.link)),
                             0.0);
    }
    est.mean = sum.value() / static_cast<double>(est.n_samples);
    CompensatedSum squares;
    for (std::size_t i = 0; i < n; ++i) {
      const Draw& d = draws[i][k];
      if (d.present) squares.add((d.value - est.mean) * (d.value - est.mean));
    }
    if (est.n_samples > 1) {
      const double var = squares.value() / static_cast<double>(est.n_samples - 1);
      est.std_error = std::sqrt(var / static_cast<double>(est.n_samples));
    }
    if (plan.probe_scheduling == ProbeScheduling::kForced) {
      no_bs = std::max(no_bs, n - est.n_samples);
    }
    report.estimates[est.link] = est;
  }
  if (no_bs > 0) {
    report.warnings.push_back(std::to_string(no_bs) +
                              " realizations had no BS in the window for some tier");
  }
  return report;
}

SweepResult convergence_sweep(const ExperimentPlan& base, const std::vector<double>& lambda_hats) {
  require(!lambda_hats.empty(), "empty lambda_hat list");
  for (std::size_t i = 0; i < lambda_hats.size(); ++i) {
    require(std::isfinite(lambda_hats[i]) && lambda_hats[i] > 0.0, "lambda_hat must be positive");
    require(i == 0 || lambda_hats[i] >= lambda_hats[i - 1], "lambda_hat list must be sorted");
  }

  SweepResult result;
  for (double lh : lambda_hats) {
    ExperimentPlan plan = base;
    plan.densities.lambda_m = lh * base.densities.lambda_u;
    plan.densities.lambda_mu = lh * base.densities.lambda_u;
    const SeReport report = estimate_se(plan);
    for (const std::string& w : report.warnings) {
      result.warnings.push_back("lambda_hat " + format_count(lh) + ": " + w);
    }

    const auto& ch = plan.channel;
    const SeBounds mu_bounds = se_bounds_muw(lh, ch.alpha_mu);
    const SeBounds m_bounds =
        se_bounds_mmw(lh, plan.densities.lambda_m, ch.alpha_m, ch.theta, ch.los.r_l);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double mu_asym = lh >= 1.0 ? se_asymptotic_muw(lh, ch.alpha_mu) : nan;
    const double m_asym =
        lh >= 1.0 ? se_asymptotic_mmw(lh, plan.densities.lambda_m, ch.alpha_m, ch.los.r_l) : nan;

    for (Link link : plan.links) {
      SweepRow row;
      row.lambda_hat = lh;
      row.estimate = report.estimates.at(link);
      const bool mmw = tier_of(link) == Tier::kMmw;
      row.lower_bound = mmw ? m_bounds.lower : mu_bounds.lower;
      row.upper_bound = mmw ? m_bounds.upper : mu_bounds.upper;
      row.asymptote = mmw ? m_asym : mu_asym;
      result.rows.push_back(row);
    }
  }
  return result;
}

}  // namespace mmudn
