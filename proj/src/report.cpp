#include "mmudn/report.hpp"

#include <cmath>
#include <sstream>

#include "mmudn/analytic.hpp"
#include "mmudn/error.hpp"
#include "mmudn/text_format.hpp"

namespace mmudn {

Units parse_units(std::string_view s) {
  if (s == "nats") return Units::kNats;
  if (s == "bits") return Units::kBits;
  throw InvalidInput("unknown units '" + std::string(s) + "' (expected nats or bits)");
}

namespace {

struct TierAnalytics {
  SeBounds bounds;
  std::optional<double> asymptote;
};

TierAnalytics analytics(const NetworkConfig& c, Tier tier, double lambda_hat) {
  TierAnalytics a;
  if (tier == Tier::kMuw) {
    a.bounds = se_bounds_muw(lambda_hat, c.channel.alpha_mu);
    if (lambda_hat >= 1.0) a.asymptote = se_asymptotic_muw(lambda_hat, c.channel.alpha_mu);
  } else {
    const double lambda_m = lambda_hat * c.densities.lambda_u;
    a.bounds = se_bounds_mmw(lambda_hat, lambda_m, c.channel.alpha_m, c.channel.theta,
                             c.channel.los.r_l);
    if (lambda_hat >= 1.0) {
      a.asymptote = se_asymptotic_mmw(lambda_hat, lambda_m, c.channel.alpha_m, c.channel.los.r_l);
    }
  }
  return a;
}

std::string field(const std::optional<double>& v, double scale) {
  return v ? format_double(*v * scale) : std::string();
}

std::string field(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

void write_comments(std::ostream& out, const HeaderComments& comments) {
  for (const auto& [key, value] : comments) out << "# " << key << ": " << value << '\n';
}

}  // namespace

std::vector<SeRow> se_rows(const NetworkConfig& config, double lambda_hat, std::string_view mode,
                           std::vector<std::string>* warnings) {
  require(lambda_hat > 0.0 && std::isfinite(lambda_hat), "lambda_hat must be positive");
  require(mode == "analytic" || mode == "exact" || mode == "montecarlo",
          "unknown SE mode '" + std::string(mode) + "'");
  TierAnalytics per_tier[2] = {analytics(config, Tier::kMmw, lambda_hat),
                               analytics(config, Tier::kMuw, lambda_hat)};

  std::optional<SeReport> mc;
  if (mode == "montecarlo") {
    ExperimentPlan plan = config.experiment_plan();
    plan.densities.lambda_m = plan.densities.lambda_mu = lambda_hat * plan.densities.lambda_u;
    mc = estimate_se(plan);
    if (warnings) warnings->insert(warnings->end(), mc->warnings.begin(), mc->warnings.end());
  }
  std::optional<double> exact_muw;
  if (mode == "exact") exact_muw = se_exact_muw(lambda_hat, config.channel.alpha_mu);

  std::vector<SeRow> rows;
  for (Link link : kAllLinks) {
    const TierAnalytics& a = per_tier[tier_of(link) == Tier::kMmw ? 0 : 1];
    SeRow r;
    r.lambda_hat = lambda_hat;
    r.link = link;
    r.mode = std::string(mode);
    r.lower_bound = a.bounds.lower;
    r.upper_bound = a.bounds.upper;
    r.asymptote = a.asymptote;
    if (mc) {
      const SeEstimate& e = mc->estimates.at(link);
      r.mean = e.mean;
      r.std_error = e.std_error;
      r.n = e.n_samples;
      r.n_zero = e.n_zero_samples;
      r.n_capped = e.n_capped;
    } else if (exact_muw && tier_of(link) == Tier::kMuw) {
      r.mean = exact_muw;
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SeRow> sweep_rows(const SweepResult& sweep) {
  std::vector<SeRow> rows;
  for (const SweepRow& s : sweep.rows) {
    SeRow r;
    r.lambda_hat = s.lambda_hat;
    r.link = s.estimate.link;
    r.mode = "montecarlo";
    r.mean = s.estimate.mean;
    r.std_error = s.estimate.std_error;
    r.lower_bound = s.lower_bound;
    r.upper_bound = s.upper_bound;
    if (std::isfinite(s.asymptote)) r.asymptote = s.asymptote;
    r.n = s.estimate.n_samples;
    r.n_zero = s.estimate.n_zero_samples;
    r.n_capped = s.estimate.n_capped;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string se_csv(const std::vector<SeRow>& rows, Units units, const HeaderComments& comments) {
  const double scale = units == Units::kBits ? 1.0 / kNatsPerBit : 1.0;
  const char* unit = units == Units::kBits ? "bits" : "nats";
  std::ostringstream out;
  write_comments(out, comments);
  out << "lambda_hat,link,mode,mean_" << unit << ",stderr,lower_bound,upper_bound,asymptote,"
      << "n,n_zero,n_capped\n";
  for (const SeRow& r : rows) {
    out << format_double(r.lambda_hat) << ',' << link_name(r.link) << ',' << r.mode << ','
        << field(r.mean, scale) << ',' << field(r.std_error, scale) << ','
        << field(r.lower_bound, scale) << ',' << field(r.upper_bound, scale) << ','
        << field(r.asymptote, scale) << ',' << field(r.n) << ',' << field(r.n_zero) << ','
        << field(r.n_capped) << '\n';
  }
  return out.str();
}

std::string allocation_csv(const std::vector<AllocationRow>& rows, Units units,
                           const HeaderComments& comments) {
  const double scale = units == Units::kBits ? 1.0 / kNatsPerBit : 1.0;
  const char* unit = units == Units::kBits ? "bits" : "nats";
  std::ostringstream out;
  write_comments(out, comments);
  out << "w_m_hz,zeta,w_mu_ul_hz,w_m_ul_hz,rate_dl_" << unit << "_per_s,rate_ul_" << unit
      << "_per_s,achieved_ratio,clamped,feasible,papr_binding,cp_variant,se_source\n";
  const auto flag = [](bool b) { return b ? "true" : "false"; };
  for (const AllocationRow& row : rows) {
    const AllocationResult& a = row.result;
    out << format_double(row.w_m) << ',' << format_double(row.zeta) << ','
        << format_double(a.w_mu_ul) << ',' << format_double(a.w_m_ul) << ','
        << format_double(a.rate_dl * scale) << ',' << format_double(a.rate_ul * scale) << ','
        << format_double(a.achieved_ratio) << ',' << flag(a.clamped) << ',' << flag(a.feasible)
        << ',' << flag(a.papr_binding) << ',' << to_string(a.variant) << ','
        << to_string(row.source) << '\n';
  }
  return out.str();
}

}  // namespace mmudn
