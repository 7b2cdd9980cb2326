#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mmudn/analytic.hpp"
#include "mmudn/config.hpp"
#include "mmudn/error.hpp"

using namespace mmudn;

TEST_CASE("configuration round-trips losslessly") {
  NetworkConfig c;
  CHECK(parse_config(serialize_config(c)) == c);

  c.densities = {3e-4, 1.234567890123e-3, 7e-5};
  c.channel.alpha_m = 2.3;
  c.channel.theta = 0.1;
  c.channel.los.r_l = 49.61;
  c.spectrum.w_m = 1e9;
  c.spectrum.zeta = 1.0 / 3.0;
  c.delta_db = 6.5;
  c.delta_interpretation = DeltaInterpretation::kRawDb;
  c.cp_variant = CpVariant::kPaper;
  c.se_source = SeSource::kMonteCarlo;
  c.window_half_width = 777.5;
  c.wraparound = false;
  c.seed = 18446744073709551615ull;
  c.n_realizations = 123;
  c.sampling = SamplingMode::kFull;
  c.probe_scheduling = ProbeScheduling::kConditioned;
  c.resolve_delta();
  const NetworkConfig back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(back.spectrum.delta == 6.5);
  CHECK(serialize_config(back) == serialize_config(c));
}

TEST_CASE("partial files keep defaults; delta is converted from dB") {
  const NetworkConfig c = parse_config("; scenario notes\n[spectrum]\n# PAPR threshold\ndelta_db = 10\nzeta = 0.5\n");
  CHECK(c.spectrum.zeta == 0.5);
  CHECK(c.spectrum.delta == doctest::Approx(10.0));
  CHECK(c.densities == DensityConfig{});
}

TEST_CASE("invalid configurations are rejected") {
  CHECK_THROWS_AS(parse_config("[densities]\nlambda_q = 1\n"), InvalidInput);
  CHECK_THROWS_AS(parse_config("[nope]\nx = 1\n"), InvalidInput);
  CHECK_THROWS_AS(parse_config("[spectrum]\nzeta = 1.5\n"), InvalidInput);
  CHECK_THROWS_AS(parse_config("[spectrum]\nepsilon = abc\n"), InvalidInput);
  CHECK_THROWS_AS(parse_config("[channel]\nalpha_m = 2\n"), InvalidInput);
  CHECK_THROWS_AS(parse_config("[experiment]\nseed = -3\n"), InvalidInput);
  CHECK_THROWS_AS(parse_config("[experiment]\nsampling = sometimes\n"), InvalidInput);
  CHECK_THROWS_AS(parse_config("[blockage]\nr_l_m = 100\nstats_file = x.txt\n"), InvalidInput);
  CHECK_THROWS_AS(parse_config("[blockage]\nstats_file = /nonexistent/stats.txt\n"), InvalidInput);
}

TEST_CASE("building statistics file resolves the LOS distance") {
  const auto dir = std::filesystem::temp_directory_path() / "mmudn_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "gangnam.txt");
    f << "avg_perimeter_m = 59.02\navg_area_m2 = 218.6\ncoverage = 0.3477\n"
         "height_log_mu = 1.62\nheight_log_sigma = 0.27\nbs_height_m = 14.23\n";
  }
  const NetworkConfig c = parse_config("[blockage]\nstats_file = gangnam.txt\n", dir);
  const BuildingStats s{59.02, 218.6, 0.3477, {1.62, 0.27}, 14.23};
  CHECK(c.channel.los.r_l == doctest::Approx(avg_los_distance(s)));
  CHECK(c.stats_file == std::optional<std::string>("gangnam.txt"));
  {
    std::ofstream f(dir / "scenario.ini");
    f << "[blockage]\nstats_file = gangnam.txt\neta_convention = clearance\n";
  }
  const NetworkConfig d = load_config(dir / "scenario.ini");
  CHECK(d.channel.los.r_l == doctest::Approx(avg_los_distance(s, EtaConvention::kClearance)));
  std::filesystem::remove_all(dir);
}

TEST_CASE("presets") {
  for (const char* name : {"fig2", "fig3", "fig4", "fig5a", "fig5b"}) {
    const Preset& p = find_preset(name);
    CHECK(p.name == name);
    p.config.validate();
    CHECK_FALSE(p.sweeps.lambda_hats.empty());
    CHECK(p.config.spectrum.w_mu == 20e6);
    CHECK(p.config.spectrum.delta == doctest::Approx(db_to_linear(7.0)));
    CHECK(parse_config(serialize_config(p.config)) == p.config);
  }
  CHECK(find_preset("fig3").config.channel.los.r_l == doctest::Approx(49.61));
  CHECK(find_preset("fig5b").sweeps.zetas.size() == 10);
  CHECK_THROWS_AS(find_preset("fig9"), InvalidInput);
}

TEST_CASE("optimizer spectral efficiencies by source") {
  NetworkConfig c;
  const SeSet asym = spectral_efficiencies(c, SeSource::kAsymptotic);
  CHECK(asym.mu_dl == doctest::Approx(2.0 * std::log(4.0)));
  const SeSet mid = spectral_efficiencies(c, SeSource::kBoundsMidpoint);
  const SeSet exact = spectral_efficiencies(c, SeSource::kExact);
  CHECK(mid.m_dl == exact.m_dl);
  CHECK(exact.mu_dl == doctest::Approx(se_exact_muw(4.0, 4.0)));
  c.n_realizations = 50;
  c.threads = 1;
  const SeSet mc = spectral_efficiencies(c, SeSource::kMonteCarlo);
  CHECK(mc.mu_dl > 0.0);
  CHECK(mc.m_dl >= 0.0);
}
