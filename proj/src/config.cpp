#include "mmudn/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "mmudn/analytic.hpp"
#include "mmudn/building_io.hpp"
#include "mmudn/error.hpp"
#include "mmudn/text_format.hpp"

namespace mmudn {

namespace pt = boost::property_tree;

std::string_view to_string(SeSource s) noexcept {
  switch (s) {
    case SeSource::kAsymptotic: return "asymptotic";
    case SeSource::kBoundsMidpoint: return "bounds_midpoint";
    case SeSource::kExact: return "exact";
    case SeSource::kMonteCarlo: return "montecarlo";
  }
  return "?";
}

std::string_view to_string(CpVariant v) noexcept {
  return v == CpVariant::kInversion ? "inversion" : "paper";
}

std::string_view to_string(DeltaInterpretation d) noexcept {
  return d == DeltaInterpretation::kLinear ? "linear" : "raw_db";
}

std::string_view to_string(EtaConvention e) noexcept {
  return e == EtaConvention::kBlocking ? "blocking" : "clearance";
}

std::string_view to_string(SamplingMode m) noexcept {
  return m == SamplingMode::kLazyCells ? "lazy_cells" : "full";
}

std::string_view to_string(ProbeScheduling p) noexcept {
  return p == ProbeScheduling::kForced ? "forced" : "conditioned";
}

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view text, const E (&values)[N], std::string_view what) {
  for (E v : values) {
    if (to_string(v) == text) return v;
  }
  throw InvalidInput("unknown " + std::string(what) + " '" + std::string(text) + "'");
}

constexpr SeSource kSeSources[] = {SeSource::kAsymptotic, SeSource::kBoundsMidpoint,
                                   SeSource::kExact, SeSource::kMonteCarlo};
constexpr CpVariant kCpVariants[] = {CpVariant::kInversion, CpVariant::kPaper};
constexpr DeltaInterpretation kDeltaModes[] = {DeltaInterpretation::kLinear,
                                               DeltaInterpretation::kRawDb};
constexpr EtaConvention kEtaConventions[] = {EtaConvention::kBlocking, EtaConvention::kClearance};
constexpr SamplingMode kSamplingModes[] = {SamplingMode::kLazyCells, SamplingMode::kFull};
constexpr ProbeScheduling kProbeModes[] = {ProbeScheduling::kForced, ProbeScheduling::kConditioned};

}  // namespace

SeSource parse_se_source(std::string_view s) { return parse_enum(s, kSeSources, "SE source"); }
CpVariant parse_cp_variant(std::string_view s) { return parse_enum(s, kCpVariants, "C_P variant"); }
EtaConvention parse_eta_convention(std::string_view s) {
  return parse_enum(s, kEtaConventions, "eta convention");
}

void NetworkConfig::validate() const {
  densities.validate();
  channel.validate();
  spectrum.validate();
  if (window_half_width) Window{*window_half_width, wraparound}.validate();
  require(n_realizations >= 1, "n_realizations must be >= 1");
  require(cap_nats > 0.0, "cap_nats must be positive");
}

void NetworkConfig::resolve_delta() {
  spectrum.delta =
      delta_interpretation == DeltaInterpretation::kLinear ? db_to_linear(delta_db) : delta_db;
}

ExperimentPlan NetworkConfig::experiment_plan() const {
  ExperimentPlan plan;
  plan.densities = densities;
  plan.channel = channel;
  if (window_half_width) plan.window = Window{*window_half_width, wraparound};
  plan.seed = seed;
  plan.n_realizations = n_realizations;
  plan.cap_nats = cap_nats;
  plan.sampling = sampling;
  plan.probe_scheduling = probe_scheduling;
  plan.threads = threads;
  return plan;
}

AsymptoticChannel NetworkConfig::asymptotic_channel() const {
  return {channel.alpha_m, channel.alpha_mu, channel.los.r_l};
}

std::string serialize_config(const NetworkConfig& c) {
  pt::ptree tree;
  const auto put = [&](const std::string& key, const std::string& value) { tree.put(key, value); };
  const auto num = [&](const std::string& key, double v) { put(key, format_double(v)); };

  num("densities.lambda_u_per_m2", c.densities.lambda_u);
  num("densities.lambda_m_per_m2", c.densities.lambda_m);
  num("densities.lambda_mu_per_m2", c.densities.lambda_mu);
  num("channel.alpha_m", c.channel.alpha_m);
  num("channel.alpha_mu", c.channel.alpha_mu);
  num("channel.theta_rad", c.channel.theta);
  num("channel.noise_power", c.channel.noise_power);
  if (c.stats_file) {
    put("blockage.stats_file", *c.stats_file);
  } else {
    num("blockage.r_l_m", c.channel.los.r_l);
  }
  put("blockage.eta_convention", std::string(to_string(c.eta_convention)));
  num("spectrum.w_mu_hz", c.spectrum.w_mu);
  num("spectrum.w_m_hz", c.spectrum.w_m);
  num("spectrum.f_s_hz", c.spectrum.f_s);
  num("spectrum.delta_db", c.delta_db);
  put("spectrum.delta_interpretation", std::string(to_string(c.delta_interpretation)));
  num("spectrum.epsilon", c.spectrum.epsilon);
  num("spectrum.zeta", c.spectrum.zeta);
  put("spectrum.cp_variant", std::string(to_string(c.cp_variant)));
  put("spectrum.se_source", std::string(to_string(c.se_source)));
  put("window.half_width_m", c.window_half_width ? format_double(*c.window_half_width) : "auto");
  put("window.wraparound", c.wraparound ? "true" : "false");
  put("experiment.seed", std::to_string(c.seed));
  put("experiment.n_realizations", std::to_string(c.n_realizations));
  num("experiment.cap_nats", c.cap_nats);
  put("experiment.threads", std::to_string(c.threads));
  put("experiment.sampling", std::string(to_string(c.sampling)));
  put("experiment.probe_scheduling", std::string(to_string(c.probe_scheduling)));

  std::ostringstream out;
  pt::write_ini(out, tree);
  return out.str();
}

NetworkConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }

  static const std::set<std::string> known = {
      "densities.lambda_u_per_m2", "densities.lambda_m_per_m2", "densities.lambda_mu_per_m2",
      "channel.alpha_m", "channel.alpha_mu", "channel.theta_rad", "channel.noise_power",
      "blockage.r_l_m", "blockage.stats_file", "blockage.eta_convention",
      "spectrum.w_mu_hz", "spectrum.w_m_hz", "spectrum.f_s_hz", "spectrum.delta_db",
      "spectrum.delta_interpretation", "spectrum.epsilon", "spectrum.zeta",
      "spectrum.cp_variant", "spectrum.se_source", "window.half_width_m", "window.wraparound",
      "experiment.seed", "experiment.n_realizations", "experiment.cap_nats",
      "experiment.threads", "experiment.sampling", "experiment.probe_scheduling"};
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw InvalidInput("config: key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      if (!known.count(section + "." + key)) {
        throw InvalidInput("config: unknown key '" + key + "' in [" + section + "]");
      }
    }
  }

  NetworkConfig c;
  const auto text_of = [&](const std::string& key) { return tree.get_optional<std::string>(key); };
  const auto num = [&](const std::string& key, double& target) {
    if (auto v = text_of(key)) target = parse_double(*v, key);
  };
  const auto integer = [&](const std::string& key, auto& target) {
    if (auto v = text_of(key)) {
      using T = std::remove_reference_t<decltype(target)>;
      const std::uint64_t parsed = parse_unsigned(*v, key);
      require(parsed <= std::numeric_limits<T>::max(), "config: " + key + " is out of range");
      target = static_cast<T>(parsed);
    }
  };

  num("densities.lambda_u_per_m2", c.densities.lambda_u);
  num("densities.lambda_m_per_m2", c.densities.lambda_m);
  num("densities.lambda_mu_per_m2", c.densities.lambda_mu);
  num("channel.alpha_m", c.channel.alpha_m);
  num("channel.alpha_mu", c.channel.alpha_mu);
  num("channel.theta_rad", c.channel.theta);
  num("channel.noise_power", c.channel.noise_power);
  if (auto v = text_of("blockage.eta_convention")) c.eta_convention = parse_eta_convention(*v);
  const auto r_l = text_of("blockage.r_l_m");
  const auto stats = text_of("blockage.stats_file");
  if (r_l && stats) throw InvalidInput("config: give either blockage.r_l_m or blockage.stats_file");
  if (r_l) c.channel.los.r_l = parse_double(*r_l, "blockage.r_l_m");
  if (stats) {
    c.stats_file = *stats;
    std::filesystem::path path(*stats);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    std::ifstream f(path);
    if (!f) throw InvalidInput("config: cannot open building stats " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    c.channel.los.r_l = avg_los_distance(parse_building_stats(buf.str()), c.eta_convention);
  }
  num("spectrum.w_mu_hz", c.spectrum.w_mu);
  num("spectrum.w_m_hz", c.spectrum.w_m);
  num("spectrum.f_s_hz", c.spectrum.f_s);
  num("spectrum.delta_db", c.delta_db);
  if (auto v = text_of("spectrum.delta_interpretation")) {
    c.delta_interpretation = parse_enum(*v, kDeltaModes, "delta interpretation");
  }
  num("spectrum.epsilon", c.spectrum.epsilon);
  num("spectrum.zeta", c.spectrum.zeta);
  if (auto v = text_of("spectrum.cp_variant")) c.cp_variant = parse_cp_variant(*v);
  if (auto v = text_of("spectrum.se_source")) c.se_source = parse_se_source(*v);
  if (auto v = text_of("window.half_width_m"); v && trim(*v) != "auto") {
    c.window_half_width = parse_double(*v, "window.half_width_m");
  }
  if (auto v = text_of("window.wraparound")) {
    const auto t = trim(*v);
    require(t == "true" || t == "false", "config: window.wraparound must be true or false");
    c.wraparound = t == "true";
  }
  integer("experiment.seed", c.seed);
  integer("experiment.n_realizations", c.n_realizations);
  num("experiment.cap_nats", c.cap_nats);
  integer("experiment.threads", c.threads);
  if (auto v = text_of("experiment.sampling")) {
    c.sampling = parse_enum(*v, kSamplingModes, "sampling mode");
  }
  if (auto v = text_of("experiment.probe_scheduling")) {
    c.probe_scheduling = parse_enum(*v, kProbeModes, "probe scheduling");
  }
  c.resolve_delta();
  c.validate();
  return c;
}

NetworkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str(), path.parent_path());
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

namespace {

std::vector<double> range(double first, double last, double step) {
  std::vector<double> out;
  for (int i = 0;; ++i) {
    const double v = first + i * step;
    if (v > last * (1 + 1e-12)) break;
    out.push_back(v);
  }
  return out;
}

Preset make_preset(std::string name, std::string description, double r_l, PresetSweeps sweeps) {
  NetworkConfig c;
  c.densities = {2e-4, 4e-4, 1e-4};
  c.channel.los.r_l = r_l;
  c.spectrum.w_mu = 20e6;
  c.spectrum.w_m = 500e6;
  c.spectrum.f_s = 244.14e3;
  c.delta_db = 7.0;
  c.spectrum.epsilon = 0.7;
  c.spectrum.zeta = 0.2;
  c.resolve_delta();
  return {std::move(name), std::move(description), c, std::move(sweeps)};
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = [] {
    const std::vector<double> lambda_hats{2, 5, 10, 20, 50, 100, 200, 500, 1000};
    const std::vector<double> zetas = range(0.1, 1.0, 0.1);
    const std::vector<double> w_m = range(100e6, 1000e6, 100e6);
    // Gangnam average LOS distance from its building statistics.
    constexpr double kGangnamRl = 49.61;
    return std::vector<Preset>{
        make_preset("fig2", "SE and maximized DL rate versus density ratio, R_L = 100 m", 100.0,
                    {lambda_hats, w_m, {0.2}}),
        make_preset("fig3", "maximized DL rate versus zeta with Gangnam geography", kGangnamRl,
                    {lambda_hats, {500e6}, zetas}),
        make_preset("fig4", "maximized DL rate versus mmW bandwidth, R_L = 100 m", 100.0,
                    {lambda_hats, w_m, {0.2}}),
        make_preset("fig5a", "uW UL allocation versus mmW bandwidth, zeta = 0.2", 100.0,
                    {lambda_hats, w_m, {0.2}}),
        make_preset("fig5b", "uW UL allocation versus zeta, W_m = 500 MHz", 100.0,
                    {lambda_hats, {500e6}, zetas}),
    };
  }();
  return all;
}

const Preset& find_preset(std::string_view name) {
  for (const Preset& p : presets()) {
    if (p.name == name) return p;
  }
  throw InvalidInput("unknown preset '" + std::string(name) + "'");
}

SeSet spectral_efficiencies(const NetworkConfig& config, SeSource source) {
  config.validate();
  const DensityConfig& d = config.densities;
  const ChannelConfig& ch = config.channel;
  switch (source) {
    case SeSource::kAsymptotic:
      return asymptotic_se(d, config.asymptotic_channel());
    case SeSource::kBoundsMidpoint:
    case SeSource::kExact: {
      const double mm = se_bounds_mmw(d.lambda_hat_m(), d.lambda_m, ch.alpha_m, ch.theta,
                                      ch.los.r_l).midpoint();
      const double mu = source == SeSource::kExact ? se_exact_muw(d.lambda_hat_mu(), ch.alpha_mu)
                                                   : se_bounds_muw(d.lambda_hat_mu(), ch.alpha_mu).midpoint();
      return {mu, mu, mm, mm};
    }
    case SeSource::kMonteCarlo: {
      const SeReport r = estimate_se(config.experiment_plan());
      return {r.estimates.at(Link::kMuwDl).mean, r.estimates.at(Link::kMuwUl).mean,
              r.estimates.at(Link::kMmwDl).mean, r.estimates.at(Link::kMmwUl).mean};
    }
  }
  throw InvalidInput("unknown SE source");
}

}  // namespace mmudn
