#include "mmudn/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "mmudn/analytic.hpp"
#include "mmudn/error.hpp"

namespace mmudn {

void SpectrumConfig::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  require(positive(w_mu), "W_mu must be positive");
  require(positive(w_m), "W_m must be positive");
  require(positive(f_s), "subcarrier spacing must be positive");
  require(positive(delta), "PAPR threshold must be positive");
  require(epsilon > 0.0 && epsilon < 1.0, "PAPR outage target must lie in (0, 1)");
  require(zeta >= 0.0 && zeta <= 1.0, "zeta must lie in [0, 1]");
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

double papr_outage(double w_m_ul, double f_s, double delta) {
  require(w_m_ul >= 0.0 && f_s > 0.0 && delta > 0.0, "PAPR outage inputs must be positive");
  const double rate = std::exp(-delta) / f_s * std::sqrt(std::numbers::pi * delta / 3.0);
  return -std::expm1(-w_m_ul * rate);
}

double papr_inversion(double f_s, double delta, double epsilon) {
  require(f_s > 0.0 && delta > 0.0, "PAPR inputs must be positive");
  require(epsilon >= 0.0 && epsilon < 1.0, "outage target must lie in [0, 1)");
  return f_s * std::exp(delta) * std::sqrt(3.0 / (std::numbers::pi * delta)) *
         -std::log1p(-epsilon);
}

double paper_cp(double f_s, double delta, double epsilon) {
  require(f_s > 0.0 && delta > 0.0, "PAPR inputs must be positive");
  require(epsilon >= 0.0 && epsilon < 1.0, "outage target must lie in [0, 1)");
  if (epsilon == 0.0) return 0.0;
  return std::sqrt(3.0) * f_s * std::exp(delta) / std::sqrt(std::numbers::pi * delta) /
         -std::log(epsilon);
}

MmwUplinkCap max_w_m_ul(const SpectrumConfig& spec, CpVariant variant) {
  spec.validate();
  MmwUplinkCap cap;
  cap.variant = variant;
  cap.inversion = papr_inversion(spec.f_s, spec.delta, spec.epsilon);
  cap.paper_cp = paper_cp(spec.f_s, spec.delta, spec.epsilon);
  const double chosen = variant == CpVariant::kInversion ? cap.inversion : cap.paper_cp;
  cap.clamped = chosen > spec.w_m;
  cap.value = std::min(chosen, spec.w_m);
  return cap;
}

Rates rates(double w_mu_ul, double w_m_ul, const SeSet& se, const SpectrumConfig& spec) {
  require(w_mu_ul >= 0.0 && w_mu_ul <= spec.w_mu, "uW UL bandwidth outside [0, W_mu]");
  require(w_m_ul >= 0.0 && w_m_ul <= spec.w_m, "mmW UL bandwidth outside [0, W_m]");
  Rates r;
  r.ul = w_mu_ul * se.mu_ul + w_m_ul * se.m_ul;
  r.dl = (spec.w_mu - w_mu_ul) * se.mu_dl + (spec.w_m - w_m_ul) * se.m_dl;
  return r;
}

namespace {

void finish(AllocationResult& out, const SeSet& se, const SpectrumConfig& spec) {
  const Rates r = rates(out.w_mu_ul, out.w_m_ul, se, spec);
  out.rate_dl = r.dl;
  out.rate_ul = r.ul;
  out.achieved_ratio = r.dl > 0.0 ? r.ul / r.dl : std::numeric_limits<double>::infinity();
  // Relative slack absorbs rounding in the plug-back.
  const double slack = 1e-12 * std::max(r.ul, spec.zeta * r.dl);
  out.feasible = r.ul + slack >= spec.zeta * r.dl;
}

}  // namespace

SeSet asymptotic_se(const DensityConfig& densities, const AsymptoticChannel& channel) {
  densities.validate();
  const double gm = se_asymptotic_mmw(densities.lambda_hat_m(), densities.lambda_m,
                                      channel.alpha_m, channel.r_l);
  const double gmu = se_asymptotic_muw(densities.lambda_hat_mu(), channel.alpha_mu);
  return {gmu, gmu, gm, gm};
}

AllocationResult optimize_closed_form(const SpectrumConfig& spec, const DensityConfig& densities,
                                      const AsymptoticChannel& channel, CpVariant variant) {
  spec.validate();
  densities.validate();
  require(densities.lambda_hat_m() > 1.0 && densities.lambda_hat_mu() > 1.0,
          "closed-form allocation needs lambda_hat_m, lambda_hat_mu > 1");
  const double cl = c_l(densities.lambda_m, channel.r_l);
  const double log_m = std::log(densities.lambda_hat_m());
  const double log_mu = std::log(densities.lambda_hat_mu());
  const MmwUplinkCap cap = max_w_m_ul(spec, variant);

  // zeta / (1 + zeta) == 1 / (1 + 1 / zeta), finite at zeta == 0.
  const double share = spec.zeta / (1.0 + spec.zeta);
  const double tier_ratio = channel.alpha_m * cl * log_m / (channel.alpha_mu * log_mu);

  AllocationResult out;
  out.variant = variant;
  out.w_m_ul = cap.value;
  out.papr_binding = !cap.clamped;
  out.unclamped_w_mu_ul = spec.w_mu * share + (spec.w_m * share - cap.value) * tier_ratio;
  out.w_mu_ul = std::clamp(out.unclamped_w_mu_ul, 0.0, spec.w_mu);
  out.clamped = out.w_mu_ul != out.unclamped_w_mu_ul;
  out.ratio_binding = !out.clamped;
  out.rate_dl_closed_form = (channel.alpha_m * cl * spec.w_m * log_m +
                             channel.alpha_mu * spec.w_mu * log_mu) /
                            (2.0 * (1.0 + spec.zeta));
  finish(out, asymptotic_se(densities, channel), spec);
  return out;
}

AllocationResult optimize_numeric(const SpectrumConfig& spec, const SeSet& se, CpVariant variant) {
  spec.validate();
  for (double g : {se.mu_dl, se.mu_ul, se.m_dl, se.m_ul}) {
    require(std::isfinite(g) && g >= 0.0, "spectral efficiencies must be finite and >= 0");
  }
  const MmwUplinkCap cap = max_w_m_ul(spec, variant);

  AllocationResult out;
  out.variant = variant;
  out.w_m_ul = cap.value;
  out.papr_binding = !cap.clamped;

  // R_u - zeta R_d is nondecreasing in w_mu_ul.
  const auto excess = [&](double w) {
    const Rates r = rates(w, cap.value, se, spec);
    return r.ul - spec.zeta * r.dl;
  };
  const double at_zero = excess(0.0);
  const double at_full = excess(spec.w_mu);
  if (at_zero >= 0.0) {
    out.w_mu_ul = 0.0;
  } else if (at_full < 0.0) {
    out.w_mu_ul = spec.w_mu;
  } else {
    std::uintmax_t max_iter = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(
        excess, 0.0, spec.w_mu, at_zero, at_full, boost::math::tools::eps_tolerance<double>(52),
        max_iter);
    out.w_mu_ul = 0.5 * (lo + hi);
    out.ratio_binding = true;
  }
  out.unclamped_w_mu_ul = out.w_mu_ul;
  finish(out, se, spec);
  return out;
}

}  // namespace mmudn
