#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mmudn/geometry.hpp"

namespace mmudn {

/// Log-normal law: ln(H) ~ N(mu, sigma^2). sigma == 0 is the point mass at exp(mu).
struct LogNormal {
  double mu = 0.0;
  double sigma = 0.0;

  double cdf(double h) const noexcept;
  double mean() const noexcept;
};

/// Geographic aggregates of a region's buildings.
struct BuildingStats {
  double avg_perimeter = 0.0;  ///< rho, meters
  double avg_area = 0.0;       ///< A, square meters
  double coverage = 0.0;       ///< kappa, footprint fraction in (0, 1)
  LogNormal height;            ///< building height H, meters
  double bs_height = 0.0;      ///< B, meters

  void validate() const;
};

/// Building footprint (simple polygon, meters in a projected CRS) with a floor count.
struct BuildingRecord {
  std::vector<Point2> footprint;
  int floors = 1;
};

/// Per-building measurements, as produced from footprints or read from tabular data.
struct BuildingMetrics {
  double perimeter = 0.0;
  double area = 0.0;
  int floors = 1;
};

/// Axis-aligned region used to clip footprints that straddle its boundary.
struct RegionBox {
  Point2 min;
  Point2 max;

  double area() const noexcept { return (max.x - min.x) * (max.y - min.y); }
};

/// Distance-threshold LOS model: a link is LOS iff its length does not exceed r_l.
/// r_l may be +infinity (no blockage).
struct LosModel {
  double r_l = 100.0;

  void validate() const;
  friend bool operator==(const LosModel&, const LosModel&) = default;
};

/// 1 if r <= r_l, else 0. Throws InvalidInput for negative r.
int los_indicator(const LosModel& model, double r);

/// 2D blockage parameter beta = -2 rho ln(1 - kappa) / (pi A), per meter.
double beta_param(const BuildingStats& stats);

/// Which height event the 3D parameter integrates.
enum class EtaConvention {
  /// Pr(H > (1 - s) B): the building rises above the link at fractional position s,
  /// i.e. the probability that a footprint crossing the link actually blocks it.
  kBlocking,
  /// Pr(H <= (1 - s) B), the complementary (clearance) event.
  kClearance,
};

/// eta = integral over s in [0, 1] of the chosen height event, by adaptive quadrature.
double eta_param(const BuildingStats& stats, EtaConvention convention = EtaConvention::kBlocking);

/// Same integral for an arbitrary height CDF. `breakpoints` are heights where the CDF jumps.
double eta_from_cdf(const std::function<double(double)>& height_cdf, double bs_height,
                    EtaConvention convention, std::span<const double> breakpoints = {});

/// Average LOS distance R_L = 2 (1 - kappa) / (beta eta). Throws InvalidInput when
/// beta * eta == 0 (nothing blocks; R_L unbounded).
double avg_los_distance(double coverage, double beta, double eta);
double avg_los_distance(const BuildingStats& stats,
                        EtaConvention convention = EtaConvention::kBlocking);

/// Perimeter and area of a simple polygon (open or closed ring, any orientation).
/// Throws InvalidInput for degenerate or self-intersecting rings.
BuildingMetrics polygon_metrics(std::span<const Point2> ring);

/// Aggregates building metrics. kappa is total footprint area over region_area; heights are
/// floors * floor_height, fitted by maximum likelihood on log-heights; B = fitted E[H].
BuildingStats ingest_buildings(std::span<const BuildingMetrics> buildings, double region_area,
                               double floor_height = 3.0);

/// Footprint variant. With `clip`, footprints are intersected with the box first and
/// buildings entirely outside it are dropped.
BuildingStats ingest_buildings(std::span<const BuildingRecord> records, double region_area,
                               double floor_height = 3.0,
                               const std::optional<RegionBox>& clip = std::nullopt);

/// Maximum-likelihood log-normal fit on positive samples.
LogNormal fit_log_normal(std::span<const double> samples);

}  // namespace mmudn
