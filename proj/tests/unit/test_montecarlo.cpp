#include <doctest.h>

#include <cmath>

#include "mmudn/analytic.hpp"
#include "mmudn/error.hpp"
#include "mmudn/montecarlo.hpp"

using namespace mmudn;

namespace {

ExperimentPlan small_plan(std::size_t n) {
  ExperimentPlan plan;
  plan.densities = {1e-3, 1e-3, 1e-4};
  plan.n_realizations = n;
  plan.seed = 17;
  plan.threads = 1;
  return plan;
}

}  // namespace

TEST_CASE("estimates are bit-identical across thread counts and reruns") {
  ExperimentPlan plan = small_plan(300);
  const SeReport a = estimate_se(plan);
  plan.threads = 3;
  const SeReport b = estimate_se(plan);
  for (Link l : kAllLinks) {
    CHECK(a.estimates.at(l).mean == b.estimates.at(l).mean);
    CHECK(a.estimates.at(l).std_error == b.estimates.at(l).std_error);
    CHECK(a.estimates.at(l).n_capped == b.estimates.at(l).n_capped);
  }
  plan.seed = 18;
  CHECK(estimate_se(plan).estimates.at(Link::kMuwDl).mean != a.estimates.at(Link::kMuwDl).mean);
}

TEST_CASE("a link's samples do not depend on which other links are requested") {
  ExperimentPlan plan = small_plan(200);
  const SeReport all = estimate_se(plan);
  plan.links = {Link::kMuwUl};
  CHECK(estimate_se(plan).estimates.at(Link::kMuwUl).mean == all.estimates.at(Link::kMuwUl).mean);
}

TEST_CASE("uW Monte Carlo agrees with the exact coverage integral") {
  // The simulator and the quadrature are independent routes to the same expectation.
  ExperimentPlan plan = small_plan(3000);
  plan.densities = {1e-4, 1e-3, 1e-4};
  plan.links = {Link::kMuwDl, Link::kMuwUl};
  const SeReport r = estimate_se(plan);
  const double exact = se_exact_muw(10.0, 4.0);
  for (Link l : plan.links) {
    const SeEstimate& e = r.estimates.at(l);
    CAPTURE(link_name(l));
    CHECK(std::abs(e.mean - exact) < 4.0 * e.std_error);
    CHECK(e.n_samples == plan.n_realizations);
    CHECK(e.n_zero_samples == 0);
  }
}

TEST_CASE("standard error shrinks like 1/sqrt(n)") {
  ExperimentPlan plan = small_plan(600);
  plan.links = {Link::kMuwDl};
  const double s1 = estimate_se(plan).estimates.at(Link::kMuwDl).std_error;
  plan.n_realizations = 1200;
  const double s2 = estimate_se(plan).estimates.at(Link::kMuwDl).std_error;
  CHECK(s2 / s1 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.2));
}

TEST_CASE("LOS gating zeroes mmW samples at the expected rate") {
  ExperimentPlan plan = small_plan(2000);
  plan.densities = {1e-4, 1e-4, 1e-4};
  plan.channel.los.r_l = 100.0;
  plan.links = {Link::kMmwDl};
  const SeEstimate e = estimate_se(plan).estimates.at(Link::kMmwDl);
  const double p = std::exp(-1e-4 * M_PI * 1e4);
  const double n = static_cast<double>(e.n_samples);
  CHECK(std::abs(e.n_zero_samples / n - p) < 3.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("without blockage and with omni beams the mmW tier behaves like a uW tier") {
  ExperimentPlan plan = small_plan(1500);
  plan.densities = {1e-3, 1e-3, 1e-4};
  plan.channel.alpha_m = plan.channel.alpha_mu = 4.0;
  plan.channel.theta = 2.0 * M_PI;
  plan.channel.los.r_l = INFINITY;
  const SeReport r = estimate_se(plan);
  for (auto [m, u] : {std::pair{Link::kMmwDl, Link::kMuwDl}, std::pair{Link::kMmwUl, Link::kMuwUl}}) {
    const SeEstimate& a = r.estimates.at(m);
    const SeEstimate& b = r.estimates.at(u);
    CHECK(a.n_zero_samples == 0);
    CHECK(std::abs(a.mean - b.mean) < 4.0 * std::hypot(a.std_error, b.std_error));
  }
}

TEST_CASE("caps, warnings and validation") {
  ExperimentPlan plan = small_plan(50);
  plan.cap_nats = 1.0;
  const SeReport r = estimate_se(plan);
  for (Link l : kAllLinks) CHECK(r.estimates.at(l).mean <= 1.0);
  CHECK(r.estimates.at(Link::kMuwDl).n_capped > 0);

  plan.window = Window{40.0, true};
  CHECK_FALSE(estimate_se(plan).warnings.empty());

  // gated mmW interference fits inside the window, only uW gets flagged
  plan.cap_nats = 50.0;
  plan.window = Window{1000.0, true};
  plan.channel.los.r_l = 100.0;
  plan.channel.alpha_mu = 2.2;
  plan.channel.alpha_m = 2.2;
  const auto gated = estimate_se(plan).warnings;
  REQUIRE(gated.size() == 1);
  CHECK(gated[0].rfind("uW", 0) == 0);

  plan.n_realizations = 0;
  CHECK_THROWS_AS(estimate_se(plan), InvalidInput);
  plan = small_plan(10);
  plan.links.clear();
  CHECK_THROWS_AS(estimate_se(plan), InvalidInput);
}

TEST_CASE("default window gives twenty spacings of the sparsest process") {
  const Window w = default_window({2e-4, 4e-4, 1e-4});
  CHECK(w.half_width == doctest::Approx(20.0 / std::sqrt(M_PI * 1e-4)));
}

TEST_CASE("convergence sweep rows and validation") {
  ExperimentPlan plan = small_plan(40);
  const SweepResult s = convergence_sweep(plan, {2.0, 5.0, 5.0});
  CHECK(s.rows.size() == 3 * 4);
  CHECK(s.rows[0].lambda_hat == 2.0);
  CHECK(s.rows.back().lambda_hat == 5.0);
  for (const auto& row : s.rows) {
    CHECK(row.lower_bound <= row.upper_bound);
    const bool mmw = tier_of(row.estimate.link) == Tier::kMmw;
    const double asym = mmw ? se_asymptotic_mmw(row.lambda_hat, row.lambda_hat * 1e-4, 2.5, 100.0)
                            : se_asymptotic_muw(row.lambda_hat, 4.0);
    CHECK(row.asymptote == doctest::Approx(asym));
  }
  CHECK_THROWS_AS(convergence_sweep(plan, {5.0, 2.0}), InvalidInput);
  CHECK_THROWS_AS(convergence_sweep(plan, {}), InvalidInput);
  CHECK_THROWS_AS(convergence_sweep(plan, {-1.0}), InvalidInput);
}
