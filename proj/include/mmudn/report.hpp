#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmudn/allocator.hpp"
#include "mmudn/channel.hpp"
#include "mmudn/config.hpp"
#include "mmudn/montecarlo.hpp"

namespace mmudn {

enum class Units { kNats, kBits };

Units parse_units(std::string_view s);

/// One SE table row. Absent quantities are written as empty fields.
struct SeRow {
  double lambda_hat = 0.0;
  Link link = Link::kMuwDl;
  std::string mode;  ///< analytic | exact | montecarlo
  std::optional<double> mean;
  std::optional<double> std_error;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
  std::optional<double> asymptote;
  std::optional<std::size_t> n;
  std::optional<std::size_t> n_zero;
  std::optional<std::size_t> n_capped;
};

/// Rows for the requested mode ("analytic", "exact", "montecarlo") at one density ratio;
/// both tiers use lambda = lambda_hat * lambda_u. Four rows, one per link.
std::vector<SeRow> se_rows(const NetworkConfig& config, double lambda_hat, std::string_view mode,
                           std::vector<std::string>* warnings = nullptr);

std::vector<SeRow> sweep_rows(const SweepResult& sweep);

struct AllocationRow {
  double w_m = 0.0;
  double zeta = 0.0;
  SeSource source = SeSource::kAsymptotic;
  AllocationResult result;
};

/// Comment lines ("# key: value") placed above the header row.
using HeaderComments = std::vector<std::pair<std::string, std::string>>;

/// Columns: lambda_hat, link, mode, mean_nats, stderr, lower_bound, upper_bound, asymptote,
/// n, n_zero, n_capped. In bits the SE columns are rescaled and the unit suffix follows.
std::string se_csv(const std::vector<SeRow>& rows, Units units, const HeaderComments& comments);

/// Columns: w_m_hz, zeta, w_mu_ul_hz, w_m_ul_hz, rate_dl_nats_per_s, rate_ul_nats_per_s,
/// achieved_ratio, clamped, feasible, papr_binding, cp_variant, se_source.
std::string allocation_csv(const std::vector<AllocationRow>& rows, Units units,
                           const HeaderComments& comments);

}  // namespace mmudn
