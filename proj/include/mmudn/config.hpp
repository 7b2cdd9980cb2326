#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmudn/allocator.hpp"
#include "mmudn/blockage.hpp"
#include "mmudn/channel.hpp"
#include "mmudn/geometry.hpp"
#include "mmudn/montecarlo.hpp"

namespace mmudn {

/// How the configured PAPR threshold in dB enters the outage law.
enum class DeltaInterpretation {
  kLinear,  ///< converted to a linear power ratio, 10^(dB / 10) (default)
  kRawDb,   ///< the dB figure used as-is
};

/// Where the optimizer takes its spectral efficiencies from.
enum class SeSource { kAsymptotic, kBoundsMidpoint, kExact, kMonteCarlo };

/// Every scenario parameter. Serialized as INI-style text with unit-suffixed keys:
///
///   [densities] lambda_u_per_m2, lambda_m_per_m2, lambda_mu_per_m2
///   [channel]   alpha_m, alpha_mu, theta_rad, noise_power
///   [blockage]  r_l_m | stats_file, eta_convention = blocking|clearance
///   [spectrum]  w_mu_hz, w_m_hz, f_s_hz, delta_db, delta_interpretation = linear|raw_db,
///               epsilon, zeta, cp_variant = inversion|paper,
///               se_source = asymptotic|bounds_midpoint|exact|montecarlo
///   [window]    half_width_m = auto|<meters>, wraparound = true|false
///   [experiment] seed, n_realizations, cap_nats, threads, sampling = lazy_cells|full,
///               probe_scheduling = forced|conditioned
struct NetworkConfig {
  DensityConfig densities;
  ChannelConfig channel;    ///< channel.los.r_l is resolved from stats_file when one is set
  SpectrumConfig spectrum;  ///< spectrum.delta is derived from delta_db
  double delta_db = 7.0;
  DeltaInterpretation delta_interpretation = DeltaInterpretation::kLinear;
  CpVariant cp_variant = CpVariant::kInversion;
  SeSource se_source = SeSource::kAsymptotic;
  std::optional<std::string> stats_file;
  EtaConvention eta_convention = EtaConvention::kBlocking;
  std::optional<double> window_half_width;
  bool wraparound = true;
  std::uint64_t seed = 1;
  std::size_t n_realizations = 10000;
  double cap_nats = 50.0;
  unsigned threads = 0;
  SamplingMode sampling = SamplingMode::kLazyCells;
  ProbeScheduling probe_scheduling = ProbeScheduling::kForced;

  void validate() const;
  /// Re-derives spectrum.delta from delta_db and its interpretation.
  void resolve_delta();
  ExperimentPlan experiment_plan() const;
  AsymptoticChannel asymptotic_channel() const;

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

std::string serialize_config(const NetworkConfig& config);

/// Missing keys keep their defaults; unknown keys are rejected. A relative stats_file is
/// resolved against `base_dir`.
NetworkConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
NetworkConfig load_config(const std::filesystem::path& path);

/// Sweep axes that go with a preset.
struct PresetSweeps {
  std::vector<double> lambda_hats;
  std::vector<double> w_m_hz;
  std::vector<double> zetas;
};

struct Preset {
  std::string name;
  std::string description;
  NetworkConfig config;
  PresetSweeps sweeps;
};

/// fig2, fig3, fig4, fig5a, fig5b.
const std::vector<Preset>& presets();
const Preset& find_preset(std::string_view name);

std::string_view to_string(SeSource s) noexcept;
std::string_view to_string(CpVariant v) noexcept;
std::string_view to_string(DeltaInterpretation d) noexcept;
std::string_view to_string(EtaConvention e) noexcept;
std::string_view to_string(SamplingMode m) noexcept;
std::string_view to_string(ProbeScheduling p) noexcept;

SeSource parse_se_source(std::string_view s);
CpVariant parse_cp_variant(std::string_view s);
EtaConvention parse_eta_convention(std::string_view s);

/// Spectral efficiencies for the optimizer from the configured source. The exact-integral
/// source has no mmW counterpart and uses the mmW bound midpoint there.
SeSet spectral_efficiencies(const NetworkConfig& config, SeSource source);

}  // namespace mmudn
