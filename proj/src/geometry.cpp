#include "mmudn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "mmudn/error.hpp"

namespace mmudn {

void Window::validate() const {
  require(std::isfinite(half_width) && half_width > 0.0,
          "window half_width must be positive and finite, got " + std::to_string(half_width));
}

Point2 Window::displacement(Point2 from, Point2 to) const noexcept {
  double dx = to.x - from.x;
  double dy = to.y - from.y;
  if (wraparound) {
    dx = std::remainder(dx, side());
    dy = std::remainder(dy, side());
  }
  return {dx, dy};
}

double Window::distance_squared(Point2 a, Point2 b) const noexcept {
  const Point2 d = displacement(a, b);
  return d.x * d.x + d.y * d.y;
}

double Window::distance(Point2 a, Point2 b) const noexcept {
  const Point2 d = displacement(a, b);
  return std::hypot(d.x, d.y);
}

bool Window::contains(Point2 p) const noexcept {
  return p.x >= -half_width && p.x < half_width && p.y >= -half_width && p.y < half_width;
}

void DensityConfig::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  require(positive(lambda_m), "lambda_m must be positive");
  require(positive(lambda_mu), "lambda_mu must be positive");
  require(positive(lambda_u), "lambda_u must be positive");
}

std::vector<Point2> sample_ppp(double density, const Window& window, Rng& rng) {
  require(std::isfinite(density) && density > 0.0, "PPP density must be positive");
  window.validate();
  std::poisson_distribution<long long> count_dist(density * window.area());
  const long long count = count_dist(rng);
  std::vector<Point2> points;
  points.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    const double x = -window.half_width + window.side() * rng.uniform();
    const double y = -window.half_width + window.side() * rng.uniform();
    points.push_back({x, y});
  }
  return points;
}

namespace {

constexpr double kLazyPointsPerCell = 3.0;
constexpr double kEagerPointsPerCell = 2.0;

int grid_size(double side, double density, double per_cell) {
  const double n = std::floor(side * std::sqrt(density / per_cell));
  return static_cast<int>(std::clamp(n, 1.0, 1e6));
}

}  // namespace

CellPointSet::CellPointSet(const Window& window, std::span<const Point2> points)
    : window_(window), points_(points.begin(), points.end()) {
  window_.validate();
  const double density = static_cast<double>(std::max<std::size_t>(points.size(), 1)) / window_.area();
  cells_per_side_ = grid_size(window_.side(), density, kEagerPointsPerCell);
  cell_size_ = window_.side() / cells_per_side_;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const int cx = cell_coord(points_[i].x);
    const int cy = cell_coord(points_[i].y);
    const auto key = static_cast<std::uint64_t>(cy) * cells_per_side_ + cx;
    cells_[key].members.push_back(static_cast<std::uint32_t>(i));
  }
}

CellPointSet::CellPointSet(const Window& window, double density, std::uint64_t stream_key)
    : window_(window), lazy_(true), density_(density), stream_key_(stream_key) {
  window_.validate();
  require(std::isfinite(density) && density > 0.0, "PPP density must be positive");
  cells_per_side_ = grid_size(window_.side(), density, kLazyPointsPerCell);
  cell_size_ = window_.side() / cells_per_side_;
}

int CellPointSet::cell_coord(double v) const noexcept {
  const int c = static_cast<int>(std::floor((v + window_.half_width) / cell_size_));
  return std::clamp(c, 0, cells_per_side_ - 1);
}

void CellPointSet::materialize(int cx, int cy, Cell& cell) {
  const auto key = static_cast<std::uint64_t>(cy) * cells_per_side_ + cx;
  Rng rng(substream_key(stream_key_, {key}));
  std::poisson_distribution<int> count_dist(density_ * cell_size_ * cell_size_);
  const int count = count_dist(rng);
  cell.members.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double x = -window_.half_width + (cx + rng.uniform()) * cell_size_;
    const double y = -window_.half_width + (cy + rng.uniform()) * cell_size_;
    cell.members.push_back(static_cast<std::uint32_t>(points_.size()));
    points_.push_back({x, y});
  }
}

const CellPointSet::Cell& CellPointSet::cell(int cx, int cy) {
  const auto key = static_cast<std::uint64_t>(cy) * cells_per_side_ + cx;
  auto [it, inserted] = cells_.try_emplace(key);
  if (inserted && lazy_) materialize(cx, cy, it->second);
  return it->second;
}

std::optional<std::size_t> CellPointSet::find_nearest(Point2 query) {
  const int n = cells_per_side_;
  const int cx0 = cell_coord(query.x);
  const int cy0 = cell_coord(query.y);
  // On a torus, ring n/2 already reaches every cell.
  const int max_ring = window_.wraparound ? n / 2 : n - 1;

  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d2 = std::numeric_limits<double>::infinity();

  const auto visit = [&](int cx, int cy) {
    if (window_.wraparound) {
      cx = ((cx % n) + n) % n;
      cy = ((cy % n) + n) % n;
    } else if (cx < 0 || cy < 0 || cx >= n || cy >= n) {
      return;
    }
    for (std::uint32_t idx : cell(cx, cy).members) {
      const double d2 = window_.distance_squared(query, points_[idx]);
      if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
        best_d2 = d2;
        best = idx;
      }
    }
  };

  for (int k = 0; k <= max_ring; ++k) {
    // Everything in ring k or beyond is at least (k - 1) cells away.
    if (k > 0 && best_d2 < std::pow((k - 1) * cell_size_, 2)) break;
    if (k == 0) {
      visit(cx0, cy0);
      continue;
    }
    for (int d = -k; d <= k; ++d) {
      visit(cx0 + d, cy0 - k);
      visit(cx0 + d, cy0 + k);
    }
    for (int d = -k + 1; d <= k - 1; ++d) {
      visit(cx0 - k, cy0 + d);
      visit(cx0 + k, cy0 + d);
    }
  }
  if (best == std::numeric_limits<std::size_t>::max()) return std::nullopt;
  return best;
}

std::size_t CellPointSet::nearest(Point2 query) {
  auto found = find_nearest(query);
  if (!found) throw InvalidInput("nearest-neighbour query on an empty point set");
  return *found;
}

std::vector<std::size_t> associate(std::span<const Point2> users, std::span<const Point2> bs,
                                   const Window& window) {
  require(!bs.empty(), "association requires at least one BS");
  CellPointSet index(window, bs);
  std::vector<std::size_t> assoc;
  assoc.reserve(users.size());
  for (const Point2& u : users) assoc.push_back(index.nearest(u));
  return assoc;
}

namespace {

std::vector<ActiveLink> schedule_impl(std::span<const std::size_t> assoc, std::size_t n_bs,
                                      Rng& rng, std::optional<std::size_t> pinned) {
  std::vector<std::vector<std::size_t>> members(n_bs);
  for (std::size_t u = 0; u < assoc.size(); ++u) {
    require(assoc[u] < n_bs, "association refers to BS index out of range");
    members[assoc[u]].push_back(u);
  }
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  const std::size_t pinned_bs = pinned && *pinned < assoc.size() ? assoc[*pinned] : kNone;

  std::vector<ActiveLink> active;
  for (std::size_t b = 0; b < n_bs; ++b) {
    const auto& pool = members[b];
    if (pool.empty()) continue;
    if (pinned_bs == b) {
      active.push_back({b, *pinned});
      continue;
    }
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    active.push_back({b, pool[pick(rng)]});
  }
  return active;
}

}  // namespace

std::vector<ActiveLink> schedule(std::span<const std::size_t> assoc, std::size_t n_bs, Rng& rng) {
  return schedule_impl(assoc, n_bs, rng, std::nullopt);
}

std::vector<ActiveLink> schedule(std::span<const std::size_t> assoc, std::size_t n_bs, Rng& rng,
                                 std::size_t pinned_user) {
  return schedule_impl(assoc, n_bs, rng, pinned_user);
}

std::optional<std::size_t> TierLayout::active_user(std::size_t bs_index) const {
  auto it = std::lower_bound(active.begin(), active.end(), bs_index,
                             [](const ActiveLink& l, std::size_t b) { return l.bs < b; });
  if (it == active.end() || it->bs != bs_index) return std::nullopt;
  return it->user;
}

bool Deployment::probe_scheduled(Tier t) const {
  const TierLayout& layout = tier(t);
  if (layout.assoc.empty()) return false;
  return layout.active_user(layout.assoc[kProbe]) == kProbe;
}

namespace {

enum Stream : std::uint64_t { kUsers = 0, kMmwBs = 1, kMuwBs = 2, kMmwSchedule = 3, kMuwSchedule = 4 };

TierLayout build_tier(const DeploymentOptions& options, const std::vector<Point2>& users,
                      double density, std::uint64_t seed, std::uint64_t realization,
                      Stream bs_stream, Stream schedule_stream) {
  const std::uint64_t bs_key = substream_key(seed, {realization, bs_stream});
  std::optional<CellPointSet> index;
  if (options.mode == SamplingMode::kLazyCells) {
    index.emplace(options.window, density, bs_key);
  } else {
    Rng bs_rng(bs_key);
    const auto points = sample_ppp(density, options.window, bs_rng);
    index.emplace(options.window, points);
  }

  TierLayout layout;
  if (!index->find_nearest(users[Deployment::kProbe])) return layout;  // no BS in the window
  layout.assoc.reserve(users.size());
  for (const Point2& u : users) layout.assoc.push_back(index->nearest(u));
  layout.bs = index->points();

  Rng sched_rng(substream_key(seed, {realization, schedule_stream}));
  layout.active = options.probe_scheduling == ProbeScheduling::kForced
                      ? schedule(layout.assoc, layout.bs.size(), sched_rng, Deployment::kProbe)
                      : schedule(layout.assoc, layout.bs.size(), sched_rng);
  return layout;
}

}  // namespace

Deployment sample_deployment(const DeploymentOptions& options, std::uint64_t seed,
                             std::uint64_t realization) {
  options.densities.validate();
  options.window.validate();

  Deployment dep;
  dep.window = options.window;
  Rng user_rng(substream_key(seed, {realization, kUsers}));
  dep.users.push_back({0.0, 0.0});
  auto others = sample_ppp(options.densities.lambda_u, options.window, user_rng);
  dep.users.insert(dep.users.end(), others.begin(), others.end());

  dep.mmw = build_tier(options, dep.users, options.densities.lambda_m, seed, realization, kMmwBs,
                       kMmwSchedule);
  dep.muw = build_tier(options, dep.users, options.densities.lambda_mu, seed, realization, kMuwBs,
                       kMuwSchedule);
  return dep;
}

}  // namespace mmudn
