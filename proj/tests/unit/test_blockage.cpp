#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>

#include "mmudn/blockage.hpp"
#include "mmudn/error.hpp"

using namespace mmudn;

namespace {

// E[min(H, B)] / B for log-normal H, from the partial expectation
// E[H; H < B] = exp(mu + s^2/2) Phi((ln B - mu - s^2) / s).
double blocking_eta_oracle(double mu, double s, double b) {
  const boost::math::normal z;
  const double partial = std::exp(mu + 0.5 * s * s) * cdf(z, (std::log(b) - mu - s * s) / s);
  const double tail = cdf(complement(z, (std::log(b) - mu) / s));
  return (partial + b * tail) / b;
}

BuildingStats gangnam() { return {59.02, 218.60, 0.3477, {1.62, 0.27}, 14.23}; }

}  // namespace

TEST_CASE("beta follows perimeter, area and coverage") {
  const BuildingStats s = gangnam();
  const double oracle = -2.0 * 59.02 * std::log(1.0 - 0.3477) / (std::numbers::pi * 218.60);
  CHECK(beta_param(s) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(beta_param(s) == doctest::Approx(0.073).epsilon(0.014));  // tabulated 0.073
}

TEST_CASE("eta quadrature matches the log-normal partial-expectation oracle") {
  for (const auto& [mu, sigma, b] : {std::tuple{1.62, 0.27, 14.23}, std::tuple{0.69, 0.55, 8.12},
                                     std::tuple{1.10, 0.34, 11.14}, std::tuple{2.5, 0.6, 12.0}}) {
    const BuildingStats s{50.0, 200.0, 0.3, {mu, sigma}, b};
    const double oracle = blocking_eta_oracle(mu, sigma, b);
    CHECK(eta_param(s) == doctest::Approx(oracle).epsilon(1e-7));
    CHECK(eta_param(s, EtaConvention::kClearance) == doctest::Approx(1.0 - oracle).epsilon(1e-7));
  }
}

TEST_CASE("eta extremes and monotonicity") {
  // Point mass at h0: eta = min(h0, B) / B.
  BuildingStats s = gangnam();
  s.height = {std::log(7.0), 0.0};
  CHECK(eta_param(s) == doctest::Approx(7.0 / 14.23).epsilon(1e-9));
  s.height = {std::log(2.0 * 14.23), 0.0};
  CHECK(eta_param(s) == doctest::Approx(1.0));

  // No building height at all: nothing blocks and R_L is unbounded.
  const auto flat = [](double h) { return h >= 0.0 ? 1.0 : 0.0; };
  const double eta0 = eta_from_cdf(flat, 10.0, EtaConvention::kBlocking);
  CHECK(eta0 == doctest::Approx(0.0));
  CHECK_THROWS_AS(avg_los_distance(0.3, 0.05, eta0), InvalidInput);

  // Taller buildings block more; taller BSs less.
  BuildingStats lo = gangnam(), hi = gangnam();
  hi.height.mu += 0.2;
  CHECK(eta_param(hi) > eta_param(lo));
  hi = gangnam();
  hi.bs_height *= 1.5;
  CHECK(eta_param(hi) < eta_param(lo));
}

TEST_CASE("average LOS distance") {
  CHECK(avg_los_distance(0.3477, 0.073, 0.36) == doctest::Approx(49.64).epsilon(1e-3));
  const BuildingStats s = gangnam();
  CHECK(avg_los_distance(s) ==
        doctest::Approx(2.0 * (1.0 - s.coverage) / (beta_param(s) * eta_param(s))));
  CHECK_THROWS_AS(beta_param({59.0, 218.0, 1.0, {1.6, 0.3}, 14.0}), InvalidInput);
  CHECK(los_indicator({100.0}, 100.0) == 1);
  CHECK(los_indicator({100.0}, 100.0001) == 0);
  CHECK_THROWS_AS(los_indicator({100.0}, -1.0), InvalidInput);
}

TEST_CASE("polygon metrics and validation") {
  const std::vector<Point2> square{{0, 0}, {10, 0}, {10, 10}, {0, 10}};
  const BuildingMetrics m = polygon_metrics(square);
  CHECK(m.area == doctest::Approx(100.0));
  CHECK(m.perimeter == doctest::Approx(40.0));
  const std::vector<Point2> clockwise{{0, 0}, {0, 10}, {10, 10}, {10, 0}, {0, 0}};
  CHECK(polygon_metrics(clockwise).area == doctest::Approx(100.0));
  const std::vector<Point2> bowtie{{0, 0}, {10, 10}, {10, 0}, {0, 10}};
  CHECK_THROWS_AS(polygon_metrics(bowtie), InvalidInput);
  const std::vector<Point2> line{{0, 0}, {1, 1}};
  CHECK_THROWS_AS(polygon_metrics(line), InvalidInput);
}

TEST_CASE("ingesting equal squares") {
  // Four 10 m squares of 3 floors in a 100 m x 100 m region.
  std::vector<BuildingRecord> recs;
  for (int i = 0; i < 4; ++i) {
    const double x = 20.0 * i;
    recs.push_back({{{x, 0}, {x + 10, 0}, {x + 10, 10}, {x, 10}}, 3});
  }
  const BuildingStats s = ingest_buildings(recs, 1e4, 3.0);
  CHECK(s.avg_perimeter == doctest::Approx(40.0));
  CHECK(s.avg_area == doctest::Approx(100.0));
  CHECK(s.coverage == doctest::Approx(0.04));
  CHECK(s.height.mu == doctest::Approx(std::log(9.0)));
  CHECK(s.height.sigma == doctest::Approx(0.0));
  CHECK(s.bs_height == doctest::Approx(9.0));
  // Total footprint not below the region area is rejected.
  CHECK_THROWS_AS(ingest_buildings(recs, 400.0, 3.0), InvalidInput);
}

TEST_CASE("clipping to a region box") {
  // A 20 x 10 footprint half inside the box keeps a 10 x 10 piece.
  std::vector<BuildingRecord> recs{{{{-10, 0}, {10, 0}, {10, 10}, {-10, 10}}, 2},
                                   {{{50, 50}, {60, 50}, {60, 60}, {50, 60}}, 1},
                                   {{{500, 500}, {510, 500}, {510, 510}, {500, 510}}, 9}};
  const RegionBox box{{0, 0}, {100, 100}};
  const BuildingStats s = ingest_buildings(recs, box.area(), 3.0, box);
  CHECK(s.avg_area == doctest::Approx(100.0));
  CHECK(s.avg_perimeter == doctest::Approx(40.0));
  CHECK(s.coverage == doctest::Approx(0.02));
}

TEST_CASE("log-normal maximum-likelihood fit") {
  const std::vector<double> xs{1.0, std::exp(1.0), std::exp(2.0)};
  const LogNormal f = fit_log_normal(xs);
  CHECK(f.mu == doctest::Approx(1.0));
  CHECK(f.sigma == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK_THROWS_AS(fit_log_normal(std::vector<double>{1.0, -2.0}), InvalidInput);
  CHECK_THROWS_AS(fit_log_normal(std::vector<double>{}), InvalidInput);
}
