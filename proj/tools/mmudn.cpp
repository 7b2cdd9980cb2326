// mmudn: building-statistics blockage reports, spectral-efficiency tables, UL/DL spectrum
// allocation sweeps and Monte Carlo convergence sweeps.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmudn/allocator.hpp"
#include "mmudn/blockage.hpp"
#include "mmudn/building_io.hpp"
#include "mmudn/config.hpp"
#include "mmudn/error.hpp"
#include "mmudn/manifest.hpp"
#include "mmudn/montecarlo.hpp"
#include "mmudn/report.hpp"
#include "mmudn/text_format.hpp"

namespace fs = std::filesystem;
using namespace mmudn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitInfeasible = 3;

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> realizations;
  std::optional<unsigned> threads;
  std::string out_dir;
  std::string units = "nats";
};

void add_common(CLI::App* cmd, CommonOptions& o, bool experiment) {
  auto* cfg = cmd->add_option("--config", o.config_path, "Scenario configuration file (INI)")
                  ->check(CLI::ExistingFile);
  auto* pre = cmd->add_option("--preset", o.preset, "Figure preset")
                  ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5a", "fig5b"}));
  cfg->excludes(pre);
  cmd->add_option("--out", o.out_dir, "Output directory (CSV + manifest); stdout if omitted");
  cmd->add_option("--units", o.units, "Spectral-efficiency units")
      ->check(CLI::IsMember({"nats", "bits"}));
  if (experiment) {
    cmd->add_option("--seed", o.seed, "Experiment seed (overrides the configuration)");
    cmd->add_option("--realizations", o.realizations, "Monte Carlo realizations")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", o.threads, "Worker threads (0: all cores)");
  }
}

struct Scenario {
  NetworkConfig config;
  std::optional<PresetSweeps> sweeps;
};

Scenario resolve(const CommonOptions& o) {
  Scenario s;
  if (!o.preset.empty()) {
    const Preset& p = find_preset(o.preset);
    s.config = p.config;
    s.sweeps = p.sweeps;
  } else if (!o.config_path.empty()) {
    s.config = load_config(o.config_path);
  }
  if (o.seed) s.config.seed = *o.seed;
  if (o.realizations) s.config.n_realizations = *o.realizations;
  if (o.threads) s.config.threads = *o.threads;
  s.config.validate();
  return s;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) {
    if (!out.empty()) out += ';';
    out += format_double(x);
  }
  return out;
}

// Writes `text` either to stdout or to <out>/<name> with its manifest next to it.
void emit(const CommonOptions& o, RunManifest& manifest, const std::string& name,
          const std::string& text) {
  if (o.out_dir.empty()) {
    std::cout << text;
    return;
  }
  const fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path file = dir / name;
  {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + file.string());
    out << text;
    if (!out.flush()) throw InvalidInput("write failed: " + file.string());
  }
  manifest.add_output(file);
  manifest.finished_utc = utc_timestamp();
  const fs::path manifest_file = dir / (fs::path(name).stem().string() + ".manifest.json");
  std::ofstream mout(manifest_file, std::ios::binary);
  if (!mout) throw InvalidInput("cannot write " + manifest_file.string());
  mout << manifest.to_json();
  std::cerr << "wrote " << file.string() << " and " << manifest_file.string() << '\n';
}

RunManifest start_manifest(const std::string& command, const CommonOptions& o,
                           const NetworkConfig& config) {
  RunManifest m;
  m.command = command;
  m.started_utc = utc_timestamp();
  m.seed = config.seed;
  m.config_text = serialize_config(config);
  if (!o.preset.empty()) m.arguments.push_back("preset=" + o.preset);
  m.arguments.push_back("units=" + o.units);
  m.arguments.push_back("resolved_r_l_m=" + format_double(config.channel.los.r_l));
  return m;
}

HeaderComments header(const RunManifest& m) {
  HeaderComments c{{"tool", "mmudn " + m.tool_version},
                   {"command", m.command},
                   {"manifest_digest", m.input_digest()}};
  for (const auto& a : m.arguments) c.emplace_back("arg", a);
  return c;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// ---- blockage ----

struct BlockageOptions {
  std::string geojson, csv, stats;
  std::optional<double> region_area;
  std::vector<double> bbox;
  double floor_height = 3.0;
  std::string eta_convention = "blocking";
  std::optional<double> perimeter, area, coverage, height_mu, height_sigma, bs_height;
  std::string out_dir;
};

int run_blockage(const BlockageOptions& o) {
  const EtaConvention convention = parse_eta_convention(o.eta_convention);
  BuildingStats stats;
  std::vector<std::string> args{"eta_convention=" + o.eta_convention};
  std::optional<RegionBox> box;
  if (!o.bbox.empty()) {
    require(o.bbox.size() == 4, "--region-bbox takes min_x min_y max_x max_y");
    box = RegionBox{{o.bbox[0], o.bbox[1]}, {o.bbox[2], o.bbox[3]}};
    require(box->max.x > box->min.x && box->max.y > box->min.y, "--region-bbox is empty");
  }
  const auto region_area = [&] {
    if (o.region_area) return *o.region_area;
    if (box) return box->area();
    throw InvalidInput("--region-area (or --region-bbox) is required with building data");
  };

  if (!o.geojson.empty()) {
    const auto records = read_geojson_buildings(o.geojson);
    stats = ingest_buildings(records, region_area(), o.floor_height, box);
    args.push_back("geojson_sha256=" + sha256_file(o.geojson));
  } else if (!o.csv.empty()) {
    require(!box, "--region-bbox needs footprints (GeoJSON input)");
    const auto metrics = read_csv_buildings(o.csv);
    stats = ingest_buildings(metrics, region_area(), o.floor_height);
    args.push_back("csv_sha256=" + sha256_file(o.csv));
  } else if (!o.stats.empty()) {
    std::ifstream in(o.stats);
    if (!in) throw InvalidInput("cannot open " + o.stats);
    std::ostringstream buf;
    buf << in.rdbuf();
    stats = parse_building_stats(buf.str());
  } else {
    require(o.perimeter && o.area && o.coverage && o.height_mu && o.height_sigma && o.bs_height,
            "give --geojson, --csv, --stats, or all of --perimeter --area --coverage "
            "--height-mu --height-sigma --bs-height");
    stats = {*o.perimeter, *o.area, *o.coverage, {*o.height_mu, *o.height_sigma}, *o.bs_height};
  }
  // ingested data defaults the BS height to the mean building height
  if (o.bs_height && (!o.geojson.empty() || !o.csv.empty())) {
    stats.bs_height = *o.bs_height;
    args.push_back("bs_height_m=" + format_double(*o.bs_height));
  }
  args.push_back("floor_height_m=" + format_double(o.floor_height));
  stats.validate();

  const double beta = beta_param(stats);
  const double eta = eta_param(stats, convention);
  const double r_l = avg_los_distance(stats.coverage, beta, eta);

  // The body stays parseable as a building-stats file (extra keys are ignored).
  std::ostringstream report;
  report << "# eta_convention: " << o.eta_convention << '\n' << format_building_stats(stats) << "beta_per_m = " << format_double(beta) << '\n'
         << "eta = " << format_double(eta) << '\n'
         << "r_l_m = " << format_double(r_l) << '\n';

  if (o.out_dir.empty()) {
    std::cout << report.str();
    return kExitOk;
  }
  RunManifest m;
  m.command = "blockage";
  m.started_utc = utc_timestamp();
  m.arguments = args;
  m.config_text = format_building_stats(stats);
  CommonOptions common;
  common.out_dir = o.out_dir;
  std::string text;
  for (const auto& [k, v] : header(m)) text += "# " + k + ": " + v + '\n';
  text += report.str();
  emit(common, m, "blockage.txt", text);
  return kExitOk;
}

// ---- se ----

int run_se(const CommonOptions& o, const std::string& mode, std::vector<double> lambda_hats) {
  Scenario s = resolve(o);
  if (lambda_hats.empty()) {
    lambda_hats = s.sweeps ? s.sweeps->lambda_hats : std::vector<double>{10, 100, 1000};
  }
  const std::vector<std::string> modes =
      mode == "all" ? std::vector<std::string>{"analytic", "exact", "montecarlo"}
                    : std::vector<std::string>{mode};
  RunManifest m = start_manifest("se", o, s.config);
  m.arguments.push_back("mode=" + mode);
  m.arguments.push_back("lambda_hats=" + join(lambda_hats));

  std::vector<SeRow> rows;
  std::vector<std::string> warnings;
  for (double lh : lambda_hats) {
    for (const auto& md : modes) {
      auto r = se_rows(s.config, lh, md, &warnings);
      rows.insert(rows.end(), r.begin(), r.end());
    }
  }
  print_warnings(warnings);
  emit(o, m, "se.csv", se_csv(rows, parse_units(o.units), header(m)));
  return kExitOk;
}

// ---- optimize ----

int run_optimize(const CommonOptions& o, std::vector<double> w_m, std::vector<double> zetas,
                 const std::string& se_source, const std::string& cp_variant) {
  Scenario s = resolve(o);
  NetworkConfig& c = s.config;
  if (!se_source.empty()) c.se_source = parse_se_source(se_source);
  if (!cp_variant.empty()) c.cp_variant = parse_cp_variant(cp_variant);
  if (w_m.empty()) w_m = s.sweeps ? s.sweeps->w_m_hz : std::vector<double>{c.spectrum.w_m};
  if (zetas.empty()) zetas = s.sweeps ? s.sweeps->zetas : std::vector<double>{c.spectrum.zeta};

  RunManifest m = start_manifest("optimize", o, c);
  m.arguments.push_back("w_m_hz=" + join(w_m));
  m.arguments.push_back("zeta=" + join(zetas));
  m.notes["cp_variant"] = std::string(to_string(c.cp_variant));
  m.notes["se_source"] = std::string(to_string(c.se_source));

  // The SEs do not depend on the bandwidth split, so they are computed once.
  std::optional<SeSet> se;
  if (c.se_source != SeSource::kAsymptotic) se = spectral_efficiencies(c, c.se_source);

  std::vector<AllocationRow> rows;
  bool any_infeasible = false;
  for (double wm : w_m) {
    for (double z : zetas) {
      SpectrumConfig spec = c.spectrum;
      spec.w_m = wm;
      spec.zeta = z;
      spec.validate();
      AllocationRow row{wm, z, c.se_source, {}};
      row.result = se ? optimize_numeric(spec, *se, c.cp_variant)
                      : optimize_closed_form(spec, c.densities, c.asymptotic_channel(),
                                             c.cp_variant);
      any_infeasible |= !row.result.feasible;
      rows.push_back(row);
    }
  }
  emit(o, m, "optimize.csv", allocation_csv(rows, parse_units(o.units), header(m)));
  if (any_infeasible) {
    std::cerr << "error: the UL/DL ratio constraint is infeasible for at least one row "
                 "(feasible=false)\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

// ---- sweep ----

int run_sweep(const CommonOptions& o, std::vector<double> lambda_hats) {
  Scenario s = resolve(o);
  if (lambda_hats.empty()) {
    lambda_hats = s.sweeps ? s.sweeps->lambda_hats : std::vector<double>{10, 50, 200};
  }
  RunManifest m = start_manifest("sweep", o, s.config);
  m.arguments.push_back("lambda_hats=" + join(lambda_hats));
  const SweepResult sweep = convergence_sweep(s.config.experiment_plan(), lambda_hats);
  print_warnings(sweep.warnings);
  emit(o, m, "sweep.csv", se_csv(sweep_rows(sweep), parse_units(o.units), header(m)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmW-overlaid ultra-dense network simulator and spectrum allocator"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  BlockageOptions bo;
  auto* blockage = app.add_subcommand("blockage", "Building statistics and average LOS distance");
  blockage->add_option("--geojson", bo.geojson, "GeoJSON building footprints")
      ->check(CLI::ExistingFile);
  blockage->add_option("--csv", bo.csv, "CSV with perimeter_m, area_m2, floors")
      ->check(CLI::ExistingFile);
  blockage->add_option("--stats", bo.stats, "Aggregated building statistics file")
      ->check(CLI::ExistingFile);
  blockage->add_option("--region-area", bo.region_area, "Region area, m^2")
      ->check(CLI::PositiveNumber);
  blockage->add_option("--region-bbox", bo.bbox, "Clip box: min_x min_y max_x max_y (meters)")
      ->expected(4);
  blockage->add_option("--floor-height", bo.floor_height, "Meters per floor")->capture_default_str()
      ->check(CLI::PositiveNumber);
  blockage->add_option("--eta-convention", bo.eta_convention, "blocking or clearance")->capture_default_str()
      ->check(CLI::IsMember({"blocking", "clearance"}));
  blockage->add_option("--perimeter", bo.perimeter, "Average building perimeter, m");
  blockage->add_option("--area", bo.area, "Average building area, m^2");
  blockage->add_option("--coverage", bo.coverage, "Footprint coverage ratio");
  blockage->add_option("--height-mu", bo.height_mu, "Log-normal height location");
  blockage->add_option("--height-sigma", bo.height_sigma, "Log-normal height scale");
  blockage->add_option("--bs-height", bo.bs_height, "BS height, m (default with building data: mean height)");
  blockage->add_option("--out", bo.out_dir, "Output directory; stdout if omitted");

  CommonOptions se_opts;
  std::string se_mode = "analytic";
  std::vector<double> se_lambdas;
  auto* se = app.add_subcommand("se", "Spectral-efficiency table over density ratios");
  add_common(se, se_opts, true);
  se->add_option("--mode", se_mode, "analytic, exact, montecarlo or all")->capture_default_str()
      ->check(CLI::IsMember({"analytic", "exact", "montecarlo", "all"}));
  se->add_option("--lambda-hats", se_lambdas, "Density ratios lambda / lambda_u")
      ->check(CLI::PositiveNumber);

  CommonOptions opt_opts;
  std::vector<double> opt_w_m, opt_zetas;
  std::string opt_source, opt_variant;
  auto* optimize = app.add_subcommand("optimize", "UL/DL spectrum allocation sweep");
  add_common(optimize, opt_opts, true);
  optimize->add_option("--w-m-hz", opt_w_m, "mmW bandwidths to sweep, Hz")
      ->check(CLI::PositiveNumber);
  optimize->add_option("--zeta", opt_zetas, "UL/DL ratio targets to sweep");
  optimize->add_option("--se-source,--mode", opt_source,
                       "asymptotic, bounds_midpoint, exact or montecarlo")
      ->check(CLI::IsMember({"asymptotic", "bounds_midpoint", "exact", "montecarlo"}));
  optimize->add_option("--cp-variant", opt_variant, "inversion or paper")
      ->check(CLI::IsMember({"inversion", "paper"}));

  CommonOptions sweep_opts;
  std::vector<double> sweep_lambdas;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo convergence sweep with bounds");
  add_common(sweep, sweep_opts, true);
  sweep->add_option("--lambda-hats", sweep_lambdas, "Nondecreasing density ratios")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*blockage) return run_blockage(bo);
    if (*se) return run_se(se_opts, se_mode, se_lambdas);
    if (*optimize) return run_optimize(opt_opts, opt_w_m, opt_zetas, opt_source, opt_variant);
    if (*sweep) return run_sweep(sweep_opts, sweep_lambdas);
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << " (achieved error "
              << format_double(e.achieved_error()) << ")\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
