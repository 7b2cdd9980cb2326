#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mmudn/rng.hpp"

namespace mmudn {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Square simulation window [-half_width, half_width)^2 centered at the origin.
/// With wraparound the window is treated as a torus (minimum-image distances).
struct Window {
  double half_width = 1000.0;
  bool wraparound = true;

  double side() const noexcept { return 2.0 * half_width; }
  double area() const noexcept { return side() * side(); }

  /// Throws InvalidInput unless half_width is finite and positive.
  void validate() const;

  /// Vector from `from` to `to` under the window metric.
  Point2 displacement(Point2 from, Point2 to) const noexcept;
  double distance(Point2 a, Point2 b) const noexcept;
  double distance_squared(Point2 a, Point2 b) const noexcept;
  bool contains(Point2 p) const noexcept;

  friend bool operator==(const Window&, const Window&) = default;
};

/// Densities in points per square meter.
struct DensityConfig {
  double lambda_m = 2e-4;
  double lambda_mu = 4e-4;
  double lambda_u = 1e-4;

  void validate() const;
  double lambda_hat_m() const noexcept { return lambda_m / lambda_u; }
  double lambda_hat_mu() const noexcept { return lambda_mu / lambda_u; }

  friend bool operator==(const DensityConfig&, const DensityConfig&) = default;
};

enum class Tier { kMmw, kMuw };

/// The user scheduled by a BS in the current slot.
struct ActiveLink {
  std::size_t bs = 0;
  std::size_t user = 0;

  friend bool operator==(const ActiveLink&, const ActiveLink&) = default;
};

/// Homogeneous PPP sample: Poisson(density * area) points, i.i.d. uniform on the window.
std::vector<Point2> sample_ppp(double density, const Window& window, Rng& rng);

/// Nearest-BS association (maximum average received power with unit gains).
/// Equidistant candidates resolve to the lowest BS index.
std::vector<std::size_t> associate(std::span<const Point2> users, std::span<const Point2> bs,
                                   const Window& window);

/// Uniform scheduler: every BS with at least one associated user activates exactly one of
/// them. The result is sorted by BS index; BSs without users are absent ("turned off").
std::vector<ActiveLink> schedule(std::span<const std::size_t> assoc, std::size_t n_bs, Rng& rng);

/// As above, but the BS serving `pinned_user` schedules that user.
std::vector<ActiveLink> schedule(std::span<const std::size_t> assoc, std::size_t n_bs, Rng& rng,
                                 std::size_t pinned_user);

/// Grid-bucketed point set supporting exact nearest-neighbour queries. Either built from an
/// explicit point list, or a lazily materialized PPP whose cells are generated on first touch
/// from counter-derived substreams, so the realization does not depend on query order.
class CellPointSet {
 public:
  CellPointSet(const Window& window, std::span<const Point2> points);
  CellPointSet(const Window& window, double density, std::uint64_t stream_key);

  /// Index (into points()) of the nearest point; ties go to the lowest index.
  /// Throws InvalidInput if the set is empty.
  std::size_t nearest(Point2 query);
  /// As nearest(), but returns nullopt for an empty set.
  std::optional<std::size_t> find_nearest(Point2 query);

  const std::vector<Point2>& points() const noexcept { return points_; }
  int cells_per_side() const noexcept { return cells_per_side_; }

 private:
  struct Cell {
    std::vector<std::uint32_t> members;
  };

  const Cell& cell(int cx, int cy);
  int cell_coord(double v) const noexcept;
  void materialize(int cx, int cy, Cell& cell);

  Window window_;
  int cells_per_side_ = 1;
  double cell_size_ = 0.0;
  bool lazy_ = false;
  double density_ = 0.0;
  std::uint64_t stream_key_ = 0;
  std::vector<Point2> points_;
  std::unordered_map<std::uint64_t, Cell> cells_;
};

/// Per-tier state of one realization.
struct TierLayout {
  std::vector<Point2> bs;           ///< materialized BS points
  std::vector<std::size_t> assoc;   ///< user index -> BS index
  std::vector<ActiveLink> active;   ///< one scheduled user per serving BS, sorted by bs

  /// Scheduled user of `bs`, if that BS is on.
  std::optional<std::size_t> active_user(std::size_t bs_index) const;
};

enum class SamplingMode {
  kLazyCells,  ///< BS cells generated only where association queries reach
  kFull,       ///< every BS in the window sampled up front
};

enum class ProbeScheduling {
  kForced,       ///< the probe's serving BSs always schedule the probe
  kConditioned,  ///< the probe competes uniformly; callers keep only slots where it won
};

struct DeploymentOptions {
  DensityConfig densities;
  Window window;
  SamplingMode mode = SamplingMode::kLazyCells;
  ProbeScheduling probe_scheduling = ProbeScheduling::kForced;
};

/// One sampled realization. users[0] is the probe (typical user) at the origin.
/// Under kLazyCells, `bs` holds only the materialized BSs; every BS that could have an
/// associated user is among them.
struct Deployment {
  static constexpr std::size_t kProbe = 0;

  Window window;
  std::vector<Point2> users;
  TierLayout mmw;
  TierLayout muw;

  const TierLayout& tier(Tier t) const noexcept { return t == Tier::kMmw ? mmw : muw; }
  bool probe_scheduled(Tier t) const;
};

/// Samples realization `realization` of the experiment identified by `seed`. Independent
/// realizations use disjoint substreams and may be generated concurrently.
Deployment sample_deployment(const DeploymentOptions& options, std::uint64_t seed,
                             std::uint64_t realization);

}  // namespace mmudn
