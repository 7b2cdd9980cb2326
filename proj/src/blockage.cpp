#include "mmudn/blockage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/box.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mmudn/error.hpp"

namespace mmudn {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint>;
using BgBox = bg::model::box<BgPoint>;

double LogNormal::cdf(double h) const noexcept {
  if (h <= 0.0) return 0.0;
  const double z = std::log(h) - mu;
  if (sigma == 0.0) return z >= 0.0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-z / (sigma * std::numbers::sqrt2));
}

double LogNormal::mean() const noexcept { return std::exp(mu + 0.5 * sigma * sigma); }

void BuildingStats::validate() const {
  require(std::isfinite(avg_perimeter) && avg_perimeter > 0.0, "average perimeter must be positive");
  require(std::isfinite(avg_area) && avg_area > 0.0, "average area must be positive");
  require(coverage > 0.0 && coverage < 1.0, "coverage must lie in (0, 1)");
  require(std::isfinite(height.mu), "height log-mean must be finite");
  require(std::isfinite(height.sigma) && height.sigma >= 0.0, "height log-sigma must be >= 0");
  require(std::isfinite(bs_height) && bs_height > 0.0, "BS height must be positive");
}

void LosModel::validate() const {
  require(r_l > 0.0 && !std::isnan(r_l), "LOS distance must be positive");
}

int los_indicator(const LosModel& model, double r) {
  require(r >= 0.0, "link distance must be nonnegative");
  return r <= model.r_l ? 1 : 0;
}

double beta_param(const BuildingStats& stats) {
  require(stats.coverage < 1.0, "coverage must be below 1");
  stats.validate();
  return -2.0 * stats.avg_perimeter * std::log1p(-stats.coverage) /
         (std::numbers::pi * stats.avg_area);
}

double eta_from_cdf(const std::function<double(double)>& height_cdf, double bs_height,
                    EtaConvention convention, std::span<const double> breakpoints) {
  require(std::isfinite(bs_height) && bs_height > 0.0, "BS height must be positive");
  const auto integrand = [&](double s) {
    const double clear = height_cdf((1.0 - s) * bs_height);
    return convention == EtaConvention::kBlocking ? 1.0 - clear : clear;
  };

  // Height h = (1 - s) B maps CDF jumps to s = 1 - h / B.
  std::vector<double> knots{0.0, 1.0};
  for (double h : breakpoints) {
    const double s = 1.0 - h / bs_height;
    if (s > 0.0 && s < 1.0) knots.push_back(s);
  }
  std::sort(knots.begin(), knots.end());

  constexpr double kTolerance = 1e-6;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i + 1] <= knots[i]) continue;
    double error = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, knots[i], knots[i + 1], 15, kTolerance, &error);
    if (error > kTolerance) {
      throw NumericalFailure("eta quadrature did not converge", error);
    }
  }
  return std::clamp(total, 0.0, 1.0);
}

double eta_param(const BuildingStats& stats, EtaConvention convention) {
  require(std::isfinite(stats.height.sigma) && stats.height.sigma >= 0.0,
          "height log-sigma must be >= 0");
  std::vector<double> jumps;
  if (stats.height.sigma == 0.0) jumps.push_back(std::exp(stats.height.mu));
  const LogNormal law = stats.height;
  return eta_from_cdf([law](double h) { return law.cdf(h); }, stats.bs_height, convention, jumps);
}

double avg_los_distance(double coverage, double beta, double eta) {
  require(coverage >= 0.0 && coverage < 1.0, "coverage must lie in [0, 1)");
  require(beta >= 0.0 && eta >= 0.0, "beta and eta must be nonnegative");
  if (beta * eta == 0.0) {
    throw InvalidInput("beta * eta == 0: nothing blocks, the LOS distance is unbounded");
  }
  return 2.0 * (1.0 - coverage) / (beta * eta);
}

double avg_los_distance(const BuildingStats& stats, EtaConvention convention) {
  return avg_los_distance(stats.coverage, beta_param(stats), eta_param(stats, convention));
}

namespace {

BgPolygon to_polygon(std::span<const Point2> ring) {
  BgPolygon poly;
  for (const Point2& p : ring) bg::append(poly.outer(), BgPoint(p.x, p.y));
  bg::correct(poly);
  return poly;
}

BuildingMetrics metrics_of(const BgPolygon& poly) {
  require(poly.outer().size() >= 4, "polygon needs at least three distinct vertices");
  std::string reason;
  if (!bg::is_valid(poly, reason)) throw InvalidInput("invalid building footprint: " + reason);
  BuildingMetrics m;
  m.area = std::abs(bg::area(poly));
  m.perimeter = bg::perimeter(poly);
  require(m.area > 0.0, "building footprint has zero area");
  return m;
}

}  // namespace

BuildingMetrics polygon_metrics(std::span<const Point2> ring) {
  return metrics_of(to_polygon(ring));
}

LogNormal fit_log_normal(std::span<const double> samples) {
  require(!samples.empty(), "cannot fit a log-normal to an empty sample");
  double sum = 0.0;
  for (double v : samples) {
    require(v > 0.0 && std::isfinite(v), "log-normal samples must be positive");
    sum += std::log(v);
  }
  const double n = static_cast<double>(samples.size());
  const double mu = sum / n;
  double ss = 0.0;
  for (double v : samples) ss += (std::log(v) - mu) * (std::log(v) - mu);
  return {mu, std::sqrt(ss / n)};
}

BuildingStats ingest_buildings(std::span<const BuildingMetrics> buildings, double region_area,
                               double floor_height) {
  require(!buildings.empty(), "no buildings to ingest");
  require(std::isfinite(region_area) && region_area > 0.0, "region area must be positive");
  require(std::isfinite(floor_height) && floor_height > 0.0, "floor height must be positive");

  double perimeter_sum = 0.0;
  double area_sum = 0.0;
  std::vector<double> heights;
  heights.reserve(buildings.size());
  for (const BuildingMetrics& b : buildings) {
    require(b.perimeter > 0.0 && b.area > 0.0, "building perimeter and area must be positive");
    require(b.floors >= 1, "building floor count must be >= 1");
    perimeter_sum += b.perimeter;
    area_sum += b.area;
    heights.push_back(b.floors * floor_height);
  }
  if (area_sum >= region_area) {
    throw InvalidInput("total footprint area " + std::to_string(area_sum) +
                       " m^2 is not smaller than the region area " +
                       std::to_string(region_area) + " m^2");
  }

  const double n = static_cast<double>(buildings.size());
  BuildingStats stats;
  stats.avg_perimeter = perimeter_sum / n;
  stats.avg_area = area_sum / n;
  stats.coverage = area_sum / region_area;
  stats.height = fit_log_normal(heights);
  stats.bs_height = stats.height.mean();
  return stats;
}

BuildingStats ingest_buildings(std::span<const BuildingRecord> records, double region_area,
                               double floor_height, const std::optional<RegionBox>& clip) {
  std::vector<BuildingMetrics> metrics;
  metrics.reserve(records.size());
  for (const BuildingRecord& rec : records) {
    require(rec.floors >= 1, "building floor count must be >= 1");
    const BgPolygon poly = to_polygon(rec.footprint);
    BuildingMetrics m = metrics_of(poly);
    if (clip) {
      const BgBox box(BgPoint(clip->min.x, clip->min.y), BgPoint(clip->max.x, clip->max.y));
      std::vector<BgPolygon> pieces;
      bg::intersection(poly, box, pieces);
      m.area = 0.0;
      m.perimeter = 0.0;
      for (const auto& piece : pieces) {
        m.area += std::abs(bg::area(piece));
        m.perimeter += bg::perimeter(piece);
      }
      if (m.area <= 0.0) continue;
    }
    m.floors = rec.floors;
    metrics.push_back(m);
  }
  return ingest_buildings(metrics, region_area, floor_height);
}

}  // namespace mmudn
