#pragma once

#include <array>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mmudn/blockage.hpp"
#include "mmudn/geometry.hpp"
#include "mmudn/rng.hpp"

namespace mmudn {

enum class Link { kMmwDl, kMmwUl, kMuwDl, kMuwUl };

inline constexpr std::array<Link, 4> kAllLinks{Link::kMmwDl, Link::kMmwUl, Link::kMuwDl,
                                               Link::kMuwUl};

std::string_view link_name(Link link) noexcept;  ///< "mmw_dl", "mmw_ul", "muw_dl", "muw_ul"
Link parse_link(std::string_view name);
constexpr Tier tier_of(Link link) noexcept {
  return link == Link::kMmwDl || link == Link::kMmwUl ? Tier::kMmw : Tier::kMuw;
}
constexpr bool is_downlink(Link link) noexcept {
  return link == Link::kMmwDl || link == Link::kMuwDl;
}

struct ChannelConfig {
  double alpha_m = 2.5;                   ///< mmW path-loss exponent, > 2
  double alpha_mu = 4.0;                  ///< uW path-loss exponent, > 2
  double theta = std::numbers::pi / 6.0;  ///< mmW main-lobe width in radians, (0, 2 pi]
  double noise_power = 0.0;               ///< linear; 0 gives SIR
  LosModel los;

  void validate() const;
  double alpha(Tier t) const noexcept { return t == Tier::kMmw ? alpha_m : alpha_mu; }

  friend bool operator==(const ChannelConfig&, const ChannelConfig&) = default;
};

struct SirSample {
  Link link = Link::kMuwDl;
  double value = 0.0;     ///< linear ratio; +inf when `infinite`
  bool infinite = false;  ///< no interference and no noise
  bool blocked = false;   ///< mmW serving link beyond the LOS distance (value == 0)
};

/// True iff rx lies in the main lobe of a transmitter at tx steered towards `target`,
/// i.e. the angle between tx->target and tx->rx is at most theta / 2.
bool beam_covers(Point2 tx, Point2 target, Point2 rx, double theta);
bool beam_covers(Point2 tx, Point2 target, Point2 rx, double theta, const Window& window);

/// Distances of the probe's serving link and of every interferer that reaches the
/// receiver (beam coverage and LOS gating already applied for mmW).
struct LinkGeometry {
  Link link = Link::kMuwDl;
  double serving_distance = 0.0;
  bool serving_los = true;
  std::vector<double> interferer_distances;
};

/// Throws InvalidInput if the probe has no BS in the link's tier.
LinkGeometry link_geometry(const Deployment& dep, Link link, const ChannelConfig& cfg);

/// SINR with explicit fades; `interferer_fades` must match the interferer count.
SirSample evaluate_sir(const LinkGeometry& geom, const ChannelConfig& cfg, double serving_fade,
                       std::span<const double> interferer_fades);

/// Draws unit-mean exponential fades from `rng` (serving first) and evaluates the link.
SirSample sample_sir(const Deployment& dep, Link link, const ChannelConfig& cfg, Rng& rng);

inline SirSample sir_mmw_dl(const Deployment& d, const ChannelConfig& c, Rng& r) {
  return sample_sir(d, Link::kMmwDl, c, r);
}
inline SirSample sir_mmw_ul(const Deployment& d, const ChannelConfig& c, Rng& r) {
  return sample_sir(d, Link::kMmwUl, c, r);
}
inline SirSample sir_muw_dl(const Deployment& d, const ChannelConfig& c, Rng& r) {
  return sample_sir(d, Link::kMuwDl, c, r);
}
inline SirSample sir_muw_ul(const Deployment& d, const ChannelConfig& c, Rng& r) {
  return sample_sir(d, Link::kMuwUl, c, r);
}

/// Unit-mean exponential draw.
double exponential_fade(Rng& rng);

}  // namespace mmudn
