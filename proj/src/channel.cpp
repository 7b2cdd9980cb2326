#include "mmudn/channel.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "mmudn/error.hpp"

namespace mmudn {

std::string_view link_name(Link link) noexcept {
  switch (link) {
    case Link::kMmwDl: return "mmw_dl";
    case Link::kMmwUl: return "mmw_ul";
    case Link::kMuwDl: return "muw_dl";
    case Link::kMuwUl: return "muw_ul";
  }
  return "?";
}

Link parse_link(std::string_view name) {
  for (Link l : kAllLinks) {
    if (link_name(l) == name) return l;
  }
  throw InvalidInput("unknown link '" + std::string(name) + "'");
}

void ChannelConfig::validate() const {
  require(std::isfinite(alpha_m) && alpha_m > 2.0, "alpha_m must exceed 2");
  require(std::isfinite(alpha_mu) && alpha_mu > 2.0, "alpha_mu must exceed 2");
  require(theta > 0.0 && theta <= 2.0 * std::numbers::pi, "theta must lie in (0, 2 pi]");
  require(std::isfinite(noise_power) && noise_power >= 0.0, "noise power must be >= 0");
  los.validate();
}

namespace {

bool covers(Point2 to_target, Point2 to_rx, double theta) {
  if (theta >= 2.0 * std::numbers::pi) return true;
  if (to_rx.x == 0.0 && to_rx.y == 0.0) return true;
  const double cross = to_target.x * to_rx.y - to_target.y * to_rx.x;
  const double dot = to_target.x * to_rx.x + to_target.y * to_rx.y;
  return std::atan2(std::abs(cross), dot) <= 0.5 * theta;
}

}  // namespace

bool beam_covers(Point2 tx, Point2 target, Point2 rx, double theta) {
  return covers({target.x - tx.x, target.y - tx.y}, {rx.x - tx.x, rx.y - tx.y}, theta);
}

bool beam_covers(Point2 tx, Point2 target, Point2 rx, double theta, const Window& window) {
  return covers(window.displacement(tx, target), window.displacement(tx, rx), theta);
}

LinkGeometry link_geometry(const Deployment& dep, Link link, const ChannelConfig& cfg) {
  const Tier tier = tier_of(link);
  const TierLayout& layout = dep.tier(tier);
  if (layout.assoc.empty()) {
    throw InvalidInput("probe has no serving BS in tier of link " + std::string(link_name(link)));
  }
  const bool mmw = tier == Tier::kMmw;
  const bool downlink = is_downlink(link);
  const std::size_t serving_bs = layout.assoc[Deployment::kProbe];
  const Point2 probe = dep.users[Deployment::kProbe];
  const Point2 serving = layout.bs[serving_bs];
  // Receiver of the probe's link: the probe on DL, its serving BS on UL.
  const Point2 rx = downlink ? probe : serving;

  LinkGeometry geom;
  geom.link = link;
  geom.serving_distance = dep.window.distance(probe, serving);
  geom.serving_los = !mmw || los_indicator(cfg.los, geom.serving_distance) == 1;
  geom.interferer_distances.reserve(layout.active.size());

  for (const ActiveLink& a : layout.active) {
    if (a.bs == serving_bs) continue;
    const Point2 bs = layout.bs[a.bs];
    const Point2 user = dep.users[a.user];
    const Point2 tx = downlink ? bs : user;
    const Point2 target = downlink ? user : bs;
    const double d = dep.window.distance(tx, rx);
    if (mmw) {
      if (los_indicator(cfg.los, d) == 0) continue;
      if (!beam_covers(tx, target, rx, cfg.theta, dep.window)) continue;
    }
    geom.interferer_distances.push_back(d);
  }
  return geom;
}

SirSample evaluate_sir(const LinkGeometry& geom, const ChannelConfig& cfg, double serving_fade,
                       std::span<const double> interferer_fades) {
  require(interferer_fades.size() == geom.interferer_distances.size(),
          "one fade per interferer required");
  const double alpha = cfg.alpha(tier_of(geom.link));
  SirSample s;
  s.link = geom.link;
  if (!geom.serving_los) {
    s.blocked = true;
    return s;
  }
  const double signal = serving_fade * std::pow(geom.serving_distance, -alpha);
  double interference = cfg.noise_power;
  for (std::size_t i = 0; i < interferer_fades.size(); ++i) {
    interference += interferer_fades[i] * std::pow(geom.interferer_distances[i], -alpha);
  }
  if (interference == 0.0) {
    s.infinite = signal > 0.0;
    s.value = s.infinite ? std::numeric_limits<double>::infinity() : 0.0;
    return s;
  }
  s.value = signal / interference;
  return s;
}

double exponential_fade(Rng& rng) {
  std::exponential_distribution<double> fade(1.0);
  return fade(rng);
}

SirSample sample_sir(const Deployment& dep, Link link, const ChannelConfig& cfg, Rng& rng) {
  const LinkGeometry geom = link_geometry(dep, link, cfg);
  const double serving_fade = exponential_fade(rng);
  std::vector<double> fades(geom.interferer_distances.size());
  for (double& f : fades) f = exponential_fade(rng);
  return evaluate_sir(geom, cfg, serving_fade, fades);
}

}  // namespace mmudn
