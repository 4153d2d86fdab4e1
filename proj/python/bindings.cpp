#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "orlint/constants.hpp"
#include "orlint/error.hpp"
#include "orlint/kfunc.hpp"
#include "orlint/measure.hpp"
#include "orlint/orlicz.hpp"
#include "orlint/quasiconcave.hpp"
#include "orlint/spec_io.hpp"
#include "orlint/verify.hpp"

namespace py = pybind11;
using namespace orlint;

namespace {

SampleFunction make_function(const std::vector<double>& values, const std::vector<double>& weights) {
  auto space = weights.empty() ? DiscreteMeasureSpace::uniform(values.size()) : DiscreteMeasureSpace::make(weights);
  return {space, values};
}

OrliczFunction phi_from(const std::string& spec) {
  return io::build_phi(io::normalize_phi(io::parse_json(spec, "phi spec")));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orlicz-space interpolation toolkit (compiled core)";

  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<DomainOverflow>(m, "DomainOverflow", PyExc_ValueError);
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", PyExc_RuntimeError);

  m.def("sparr_gamma", [](double p, double q) { return sparr_gamma(p, q).value; }, py::arg("p"), py::arg("q"));
  m.def("sparr_gamma_oracle", [](double p, double q) { return sparr_gamma_oracle(p, q).value; }, py::arg("p"),
        py::arg("q"));
  m.def("interp_constant_subadditive", &interp_constant_subadditive, py::arg("p"), py::arg("q"));
  m.def("interp_constant_concave_h", &interp_constant_concave_h, py::arg("p"), py::arg("q"));
  m.def("interp_constant_linear", &interp_constant_linear, py::arg("p"), py::arg("q"));

  m.def(
      "k_lp_linf",
      [](double t, const std::vector<double>& x, double p, const std::vector<double>& w) {
        return k_lp_linf(t, make_function(x, w), p).value;
      },
      py::arg("t"), py::arg("x"), py::arg("p"), py::arg("weights") = std::vector<double>{});
  m.def(
      "l_functional",
      [](double t, const std::vector<double>& x, double p, double q, const std::vector<double>& w) {
        return l_functional(t, make_function(x, w), ExponentCouple(p, q)).value;
      },
      py::arg("t"), py::arg("x"), py::arg("p"), py::arg("q"), py::arg("weights") = std::vector<double>{});
  m.def(
      "l_star_functional",
      [](double t, const std::vector<double>& x, double p, double q, const std::vector<double>& w) {
        return l_star_functional(t, make_function(x, w), ExponentCouple(p, q));
      },
      py::arg("t"), py::arg("x"), py::arg("p"), py::arg("q"), py::arg("weights") = std::vector<double>{});

  m.def(
      "norms",
      [](const std::string& phi_spec, const std::vector<double>& x, const std::vector<double>& w) {
        const OrliczFunction phi = phi_from(phi_spec);
        const SampleFunction f = make_function(x, w);
        py::dict out;
        out["modular"] = modular_or_inf(phi, f);
        out["luxemburg"] = luxemburg_norm(phi, f);
        out["amemiya"] = amemiya_norm(phi, f);
        return out;
      },
      py::arg("phi_spec"), py::arg("x"), py::arg("weights") = std::vector<double>{});

  m.def(
      "concave_majorant",
      [](const std::string& rho_spec, const std::vector<double>& t) {
        const QuasiConcaveFn rho = io::build_rho(io::normalize_rho(io::parse_json(rho_spec, "rho spec")));
        const PiecewiseLinearConcave tilde = concave_majorant(rho.evaluator(), default_majorant_grid());
        std::vector<double> out;
        out.reserve(t.size());
        for (double v : t) out.push_back(tilde(v));
        return out;
      },
      py::arg("rho_spec"), py::arg("t"));

  m.def(
      "run_scenario",
      [](const std::string& scenario_json, int jobs) {
        const Scenario s = Scenario::from_json(io::parse_json(scenario_json, "scenario"));
        VerificationReport report;
        {
          py::gil_scoped_release release;
          report = run_scenario(s, RunOptions{jobs});
        }
        return report.to_json(false).dump();
      },
      py::arg("scenario_json"), py::arg("jobs") = 1);
}
