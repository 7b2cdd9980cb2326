#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mmudn/allocator.hpp"
#include "mmudn/analytic.hpp"
#include "mmudn/blockage.hpp"
#include "mmudn/config.hpp"
#include "mmudn/error.hpp"
#include "mmudn/manifest.hpp"
#include "mmudn/montecarlo.hpp"

namespace py = pybind11;
using namespace mmudn;

namespace {

std::vector<Link> parse_links(const std::vector<std::string>& names) {
  std::vector<Link> links;
  for (const auto& n : names) links.push_back(parse_link(n));
  return links;
}

py::dict estimate_dict(const SeEstimate& e) {
  py::dict d;
  d["link"] = std::string(link_name(e.link));
  d["mean"] = e.mean;
  d["std_error"] = e.std_error;
  d["n_samples"] = e.n_samples;
  d["n_zero_samples"] = e.n_zero_samples;
  d["n_capped"] = e.n_capped;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mmudn, m) {
  m.doc() = "Spectral efficiency, blockage and bandwidth allocation for mmW-overlaid UDNs";

  static py::exception<InvalidInput> invalid(m, "InvalidInput", PyExc_ValueError);
  static py::exception<NumericalFailure> numerical(m, "NumericalFailure", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidInput& e) {
      py::set_error(invalid, e.what());
    } catch (const NumericalFailure& e) {
      py::set_error(numerical, e.what());
    }
  });

  m.def("version", [] { return std::string(version()); });

  // blockage
  py::class_<LogNormal>(m, "LogNormal")
      .def(py::init<>())
      .def(py::init([](double mu, double sigma) { return LogNormal{mu, sigma}; }),
           py::arg("mu"), py::arg("sigma"))
      .def_readwrite("mu", &LogNormal::mu)
      .def_readwrite("sigma", &LogNormal::sigma);

  py::class_<BuildingStats>(m, "BuildingStats")
      .def(py::init<>())
      .def(py::init([](double perimeter, double area, double coverage, LogNormal height,
                       double bs_height) {
             return BuildingStats{perimeter, area, coverage, height, bs_height};
           }),
           py::arg("avg_perimeter"), py::arg("avg_area"), py::arg("coverage"),
           py::arg("height"), py::arg("bs_height"))
      .def_readwrite("avg_perimeter", &BuildingStats::avg_perimeter)
      .def_readwrite("avg_area", &BuildingStats::avg_area)
      .def_readwrite("coverage", &BuildingStats::coverage)
      .def_readwrite("height", &BuildingStats::height)
      .def_readwrite("bs_height", &BuildingStats::bs_height);

  auto eta_enum = [](const std::string& s) { return parse_eta_convention(s); };
  m.def("beta_param", &beta_param, py::arg("stats"));
  m.def("eta_param",
        [=](const BuildingStats& s, const std::string& conv) { return eta_param(s, eta_enum(conv)); },
        py::arg("stats"), py::arg("convention") = "blocking");
  m.def("avg_los_distance",
        [=](const BuildingStats& s, const std::string& conv) {
          return avg_los_distance(s, eta_enum(conv));
        },
        py::arg("stats"), py::arg("convention") = "blocking");
  m.def("avg_los_distance_from_params",
        py::overload_cast<double, double, double>(&avg_los_distance), py::arg("coverage"),
        py::arg("beta"), py::arg("eta"));

  // analytic
  m.def("rho_const", &rho_const, py::arg("alpha"));
  m.def("rho_t", &rho_t, py::arg("alpha"), py::arg("t"));
  m.def("se_exact_muw", &se_exact_muw, py::arg("lambda_hat"), py::arg("alpha"));
  m.def("se_bounds_muw",
        [](double lh, double a) {
          auto b = se_bounds_muw(lh, a);
          return py::make_tuple(b.lower, b.upper);
        },
        py::arg("lambda_hat"), py::arg("alpha"));
  m.def("se_bounds_mmw",
        [](double lh, double lm, double a, double theta, double r_l) {
          auto b = se_bounds_mmw(lh, lm, a, theta, r_l);
          return py::make_tuple(b.lower, b.upper);
        },
        py::arg("lambda_hat_m"), py::arg("lambda_m"), py::arg("alpha_m"), py::arg("theta"),
        py::arg("r_l"));
  m.def("c_l", &c_l, py::arg("lambda_m"), py::arg("r_l"));
  m.def("se_asymptotic_muw", &se_asymptotic_muw, py::arg("lambda_hat"), py::arg("alpha"));
  m.def("se_asymptotic_mmw", &se_asymptotic_mmw, py::arg("lambda_hat_m"), py::arg("lambda_m"),
        py::arg("alpha_m"), py::arg("r_l"));

  // allocator
  py::class_<SpectrumConfig>(m, "SpectrumConfig")
      .def(py::init<>())
      .def_readwrite("w_mu", &SpectrumConfig::w_mu)
      .def_readwrite("w_m", &SpectrumConfig::w_m)
      .def_readwrite("f_s", &SpectrumConfig::f_s)
      .def_readwrite("delta", &SpectrumConfig::delta)
      .def_readwrite("epsilon", &SpectrumConfig::epsilon)
      .def_readwrite("zeta", &SpectrumConfig::zeta);

  py::class_<DensityConfig>(m, "DensityConfig")
      .def(py::init<>())
      .def_readwrite("lambda_m", &DensityConfig::lambda_m)
      .def_readwrite("lambda_mu", &DensityConfig::lambda_mu)
      .def_readwrite("lambda_u", &DensityConfig::lambda_u)
      .def_property_readonly("lambda_hat_m", &DensityConfig::lambda_hat_m)
      .def_property_readonly("lambda_hat_mu", &DensityConfig::lambda_hat_mu);

  py::class_<AsymptoticChannel>(m, "AsymptoticChannel")
      .def(py::init<>())
      .def_readwrite("alpha_m", &AsymptoticChannel::alpha_m)
      .def_readwrite("alpha_mu", &AsymptoticChannel::alpha_mu)
      .def_readwrite("r_l", &AsymptoticChannel::r_l);

  py::class_<SeSet>(m, "SeSet")
      .def(py::init<>())
      .def(py::init([](double mu_dl, double mu_ul, double m_dl, double m_ul) {
             return SeSet{mu_dl, mu_ul, m_dl, m_ul};
           }),
           py::arg("mu_dl"), py::arg("mu_ul"), py::arg("m_dl"), py::arg("m_ul"))
      .def_readwrite("mu_dl", &SeSet::mu_dl)
      .def_readwrite("mu_ul", &SeSet::mu_ul)
      .def_readwrite("m_dl", &SeSet::m_dl)
      .def_readwrite("m_ul", &SeSet::m_ul);

  py::class_<AllocationResult>(m, "AllocationResult")
      .def_readonly("w_mu_ul", &AllocationResult::w_mu_ul)
      .def_readonly("w_m_ul", &AllocationResult::w_m_ul)
      .def_readonly("rate_dl", &AllocationResult::rate_dl)
      .def_readonly("rate_ul", &AllocationResult::rate_ul)
      .def_readonly("achieved_ratio", &AllocationResult::achieved_ratio)
      .def_readonly("unclamped_w_mu_ul", &AllocationResult::unclamped_w_mu_ul)
      .def_readonly("rate_dl_closed_form", &AllocationResult::rate_dl_closed_form)
      .def_readonly("ratio_binding", &AllocationResult::ratio_binding)
      .def_readonly("papr_binding", &AllocationResult::papr_binding)
      .def_readonly("clamped", &AllocationResult::clamped)
      .def_readonly("feasible", &AllocationResult::feasible)
      .def_property_readonly("cp_variant",
                             [](const AllocationResult& r) { return std::string(to_string(r.variant)); });

  auto cp = [](const std::string& s) { return parse_cp_variant(s); };
  m.def("db_to_linear", &db_to_linear, py::arg("db"));
  m.def("papr_outage", &papr_outage, py::arg("w_m_ul"), py::arg("f_s"), py::arg("delta"));
  m.def("papr_inversion", &papr_inversion, py::arg("f_s"), py::arg("delta"), py::arg("epsilon"));
  m.def("paper_cp", &paper_cp, py::arg("f_s"), py::arg("delta"), py::arg("epsilon"));
  m.def("max_w_m_ul",
        [=](const SpectrumConfig& spec, const std::string& v) {
          auto c = max_w_m_ul(spec, cp(v));
          py::dict d;
          d["inversion"] = c.inversion;
          d["paper_cp"] = c.paper_cp;
          d["value"] = c.value;
          d["clamped"] = c.clamped;
          return d;
        },
        py::arg("spec"), py::arg("cp_variant") = "inversion");
  m.def("asymptotic_se", &asymptotic_se, py::arg("densities"), py::arg("channel"));
  m.def("optimize_closed_form",
        [=](const SpectrumConfig& spec, const DensityConfig& d, const AsymptoticChannel& c,
            const std::string& v) { return optimize_closed_form(spec, d, c, cp(v)); },
        py::arg("spec"), py::arg("densities"), py::arg("channel"),
        py::arg("cp_variant") = "inversion");
  m.def("optimize_numeric",
        [=](const SpectrumConfig& spec, const SeSet& se, const std::string& v) {
          return optimize_numeric(spec, se, cp(v));
        },
        py::arg("spec"), py::arg("se"), py::arg("cp_variant") = "inversion");

  // monte carlo
  py::class_<ChannelConfig>(m, "ChannelConfig")
      .def(py::init<>())
      .def_readwrite("alpha_m", &ChannelConfig::alpha_m)
      .def_readwrite("alpha_mu", &ChannelConfig::alpha_mu)
      .def_readwrite("theta", &ChannelConfig::theta)
      .def_readwrite("noise_power", &ChannelConfig::noise_power)
      .def_property(
          "r_l", [](const ChannelConfig& c) { return c.los.r_l; },
          [](ChannelConfig& c, double r) { c.los.r_l = r; });

  py::class_<ExperimentPlan>(m, "ExperimentPlan")
      .def(py::init<>())
      .def_readwrite("densities", &ExperimentPlan::densities)
      .def_readwrite("channel", &ExperimentPlan::channel)
      .def_readwrite("seed", &ExperimentPlan::seed)
      .def_readwrite("n_realizations", &ExperimentPlan::n_realizations)
      .def_readwrite("cap_nats", &ExperimentPlan::cap_nats)
      .def_readwrite("threads", &ExperimentPlan::threads)
      .def_property(
          "half_width",
          [](const ExperimentPlan& p) -> std::optional<double> {
            if (p.window) return p.window->half_width;
            return std::nullopt;
          },
          [](ExperimentPlan& p, std::optional<double> hw) {
            if (hw)
              p.window = Window{*hw, true};
            else
              p.window.reset();
          })
      .def_property(
          "links",
          [](const ExperimentPlan& p) {
            std::vector<std::string> out;
            for (Link l : p.links) out.emplace_back(link_name(l));
            return out;
          },
          [](ExperimentPlan& p, const std::vector<std::string>& names) {
            p.links = parse_links(names);
          });

  m.def(
      "estimate_se",
      [](const ExperimentPlan& plan) {
        SeReport rep;
        {
          py::gil_scoped_release release;
          rep = estimate_se(plan);
        }
        py::dict out;
        for (const auto& [link, e] : rep.estimates) out[py::str(std::string(link_name(link)))] = estimate_dict(e);
        return py::make_tuple(out, rep.warnings);
      },
      py::arg("plan"),
      "Returns ({link: estimate}, warnings). Means are in nats/s/Hz.");

  m.def(
      "convergence_sweep",
      [](const ExperimentPlan& plan, const std::vector<double>& lambda_hats) {
        SweepResult res;
        {
          py::gil_scoped_release release;
          res = convergence_sweep(plan, lambda_hats);
        }
        py::list rows;
        for (const auto& r : res.rows) {
          py::dict d = estimate_dict(r.estimate);
          d["lambda_hat"] = r.lambda_hat;
          d["lower_bound"] = r.lower_bound;
          d["upper_bound"] = r.upper_bound;
          d["asymptote"] = r.asymptote;
          rows.append(d);
        }
        return py::make_tuple(rows, res.warnings);
      },
      py::arg("plan"), py::arg("lambda_hats"));

  // configuration
  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init<>())
      .def_readwrite("densities", &NetworkConfig::densities)
      .def_readwrite("channel", &NetworkConfig::channel)
      .def_readwrite("spectrum", &NetworkConfig::spectrum)
      .def_readwrite("seed", &NetworkConfig::seed)
      .def_readwrite("n_realizations", &NetworkConfig::n_realizations)
      .def_readwrite("threads", &NetworkConfig::threads)
      .def("validate", &NetworkConfig::validate)
      .def("experiment_plan", &NetworkConfig::experiment_plan)
      .def("asymptotic_channel", &NetworkConfig::asymptotic_channel)
      .def("spectral_efficiencies",
           [](const NetworkConfig& c, const std::string& source) {
             return spectral_efficiencies(c, parse_se_source(source));
           },
           py::arg("source") = "asymptotic")
      .def("serialize", &serialize_config);

  m.def("parse_config", &parse_config, py::arg("text"),
        py::arg("base_dir") = std::filesystem::path{});
  m.def("load_config", &load_config, py::arg("path"));
  m.def("preset_names", [] {
    std::vector<std::string> names;
    for (const auto& p : presets()) names.push_back(p.name);
    return names;
  });
  m.def("preset", [](const std::string& name) { return find_preset(name).config; },
        py::arg("name"));
}
