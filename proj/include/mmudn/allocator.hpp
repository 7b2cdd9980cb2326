#pragma once

#include "mmudn/geometry.hpp"

namespace mmudn {

struct SpectrumConfig {
  double w_mu = 20e6;        ///< total uW bandwidth, Hz
  double w_m = 500e6;        ///< total mmW bandwidth, Hz
  double f_s = 244.14e3;     ///< subcarrier spacing, Hz
  double delta = 5.011872336272722;  ///< PAPR threshold as a linear power ratio (7 dB)
  double epsilon = 0.7;      ///< PAPR outage target in (0, 1)
  double zeta = 0.2;         ///< minimum UL/DL rate ratio in [0, 1]

  void validate() const;
  friend bool operator==(const SpectrumConfig&, const SpectrumConfig&) = default;
};

double db_to_linear(double db) noexcept;

/// Which expression sets the mmW UL bandwidth.
enum class CpVariant {
  kInversion,  ///< exact inversion of the PAPR outage law at outage epsilon
  kPaper,      ///< sqrt(3) f_s e^delta (pi delta)^(-1/2) / ln(1 / epsilon)
};

/// Pr(PAPR > delta) ~= 1 - exp(-(w_m_ul e^-delta / f_s) sqrt(pi delta / 3)).
double papr_outage(double w_m_ul, double f_s, double delta);

/// w_m_ul at which papr_outage equals epsilon.
double papr_inversion(double f_s, double delta, double epsilon);

/// The alternative constant C_P carrying 1 / ln(1 / epsilon).
double paper_cp(double f_s, double delta, double epsilon);

struct MmwUplinkCap {
  double inversion = 0.0;  ///< unclamped papr_inversion
  double paper_cp = 0.0;   ///< unclamped paper_cp
  double value = 0.0;      ///< selected variant, clamped to w_m
  bool clamped = false;    ///< selected variant exceeded w_m
  CpVariant variant = CpVariant::kInversion;
};

MmwUplinkCap max_w_m_ul(const SpectrumConfig& spec, CpVariant variant = CpVariant::kInversion);

/// Per-link spectral efficiencies in nats/s/Hz.
struct SeSet {
  double mu_dl = 0.0;
  double mu_ul = 0.0;
  double m_dl = 0.0;
  double m_ul = 0.0;
};

struct Rates {
  double dl = 0.0;  ///< nats/s
  double ul = 0.0;  ///< nats/s
};

/// R_u = w_mu_ul g_mu_ul + w_m_ul g_m_ul; R_d = (W_mu - w_mu_ul) g_mu_dl + (W_m - w_m_ul) g_m_dl.
Rates rates(double w_mu_ul, double w_m_ul, const SeSet& se, const SpectrumConfig& spec);

struct AllocationResult {
  double w_mu_ul = 0.0;            ///< Hz, within [0, W_mu]
  double w_m_ul = 0.0;             ///< Hz, within [0, W_m]
  double rate_dl = 0.0;            ///< nats/s at the returned allocation
  double rate_ul = 0.0;
  double achieved_ratio = 0.0;     ///< rate_ul / rate_dl (inf when rate_dl == 0)
  double unclamped_w_mu_ul = 0.0;  ///< closed form before clamping (numeric: root)
  double rate_dl_closed_form = 0.0;  ///< maximized DL rate expression (closed form only)
  bool ratio_binding = false;      ///< UL/DL ratio constraint active
  bool papr_binding = false;       ///< mmW UL limited by the PAPR target, not by W_m
  bool clamped = false;            ///< w_mu_ul clamped into [0, W_mu]
  bool feasible = true;            ///< ratio >= zeta attained
  CpVariant variant = CpVariant::kInversion;
};

/// Parameters of the asymptotic SEs used by the closed-form allocation.
struct AsymptoticChannel {
  double alpha_m = 2.5;
  double alpha_mu = 4.0;
  double r_l = 100.0;
};

/// Closed-form maximized DL rate and optimal uW UL bandwidth with asymptotic SEs.
/// Requires lambda_hat_m, lambda_hat_mu > 1.
AllocationResult optimize_closed_form(const SpectrumConfig& spec, const DensityConfig& densities,
                                      const AsymptoticChannel& channel,
                                      CpVariant variant = CpVariant::kInversion);

/// The asymptotic SE set used by optimize_closed_form.
SeSet asymptotic_se(const DensityConfig& densities, const AsymptoticChannel& channel);

/// Maximizes R_d over w_mu_ul in [0, W_mu] subject to R_u >= zeta R_d, with w_m_ul at its
/// PAPR cap, by root finding on R_u - zeta R_d. Infeasible inputs give feasible == false.
AllocationResult optimize_numeric(const SpectrumConfig& spec, const SeSet& se,
                                  CpVariant variant = CpVariant::kInversion);

}  // namespace mmudn
