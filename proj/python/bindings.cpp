#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <vector>

#include "monotone/blowup.hpp"
#include "monotone/catalog.hpp"
#include "monotone/cutoff.hpp"
#include "monotone/elliptic.hpp"
#include "monotone/error.hpp"
#include "monotone/kernel.hpp"
#include "monotone/model.hpp"
#include "monotone/parabolic.hpp"
#include "monotone/runner.hpp"
#include "monotone/selftest.hpp"

namespace py = pybind11;
using namespace monotone;

namespace {

Point to_point(const std::vector<double>& v) {
  if (v.size() > kMaxDim) throw ArgumentError("points have at most 3 coordinates");
  Point p{};
  for (std::size_t d = 0; d < v.size(); ++d) p[d] = v[d];
  return p;
}

void check_size(const Model& m, const std::vector<double>& u) {
  if (static_cast<int>(u.size()) != m.components()) {
    throw ArgumentError("expected " + std::to_string(m.components()) + " components, got " + std::to_string(u.size()));
  }
}

py::object json_to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

}  // namespace

PYBIND11_MODULE(_monotone, mod) {
  mod.doc() = "Monotonicity functionals for semilinear elliptic and parabolic systems";

  py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<OutOfDomainError>(mod, "OutOfDomainError", PyExc_ValueError);
  py::register_exception<HypothesisError>(mod, "HypothesisError", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(mod, "ArgumentError", PyExc_ValueError);

  mod.attr("__version__") = version_string();

  py::class_<Model>(mod, "Model")
      .def_static("zero", &Model::zero, py::arg("m") = 1)
      .def_static("coupled_linear", &Model::coupled_linear, py::arg("c"))
      .def_static("helmholtz", &Model::helmholtz, py::arg("c") = 0.0, py::arg("m") = 1)
      .def_static("ginzburg_landau", &Model::ginzburg_landau, py::arg("epsilon"), py::arg("m") = 1)
      .def_static("coupled_power", &Model::coupled_power, py::arg("p"), py::arg("q"), py::arg("c"))
      .def_static("single_power", &Model::single_power, py::arg("p"), py::arg("delta_floor") = 1e-8)
      .def_static("log_potential", &Model::log_potential, py::arg("c"), py::arg("delta_floor") = 1e-8)
      .def_static(
          "custom",
          [](int m, const std::string& F, const std::vector<std::string>& f) { return Model::custom(m, F, f); },
          py::arg("m"), py::arg("F"), py::arg("f") = std::vector<std::string>{})
      .def_property_readonly("name", &Model::name)
      .def_property_readonly("components", &Model::components)
      .def("F",
           [](const Model& m, const std::vector<double>& u) {
             check_size(m, u);
             return m.F(u.data());
           })
      .def("f",
           [](const Model& m, const std::vector<double>& u) {
             check_size(m, u);
             std::vector<double> out(u.size());
             m.f(u.data(), out.data());
             return out;
           })
      .def("interior_integrand", [](const Model& m, double beta, const std::vector<double>& u) {
        check_size(m, u);
        return m.interior_integrand(beta, u.data());
      });

  mod.def(
      "beta_interval",
      [](const Model& m, const std::vector<std::pair<double, double>>& box, double lo, double hi, int n) {
        std::vector<Interval> iv;
        for (const auto& [a, b] : box) iv.push_back({a, b});
        return json_to_py(to_json(pointwise_beta_interval(m, iv, lo, hi, n)));
      },
      py::arg("model"), py::arg("u_box"), py::arg("beta_lo"), py::arg("beta_hi"), py::arg("n_beta"));

  mod.def(
      "backward_heat_kernel",
      [](double t, const std::vector<double>& x, double t0, const std::vector<double>& x0, const std::string& conv) {
        return backward_heat_kernel(t, to_point(x), t0, to_point(x0), static_cast<int>(x.size()),
                                    convention_from_name(conv));
      },
      py::arg("t"), py::arg("x"), py::arg("t0"), py::arg("x0"), py::arg("convention") = "signed_abs_exponent");
  mod.def("cutoff_profile", &cutoff_profile, py::arg("d"));
  mod.def("error_integral_E", &error_integral_E, py::arg("r"), py::arg("n"), py::arg("beta"),
          py::arg("underflow") = 1e-300);

  mod.def("elliptic_catalog", &elliptic_catalog);
  mod.def("parabolic_catalog", &parabolic_catalog);

  mod.def(
      "phi",
      [](const std::string& field, const Model& model, int dim, double beta, double r, const std::vector<double>& x0,
         const Params& params) {
        const auto u = exact_sampler(field, dim, params);
        const PhiValue v = phi(*u, model, to_point(x0), beta, r, Quadrature(dim));
        return py::dict(py::arg("r") = v.r, py::arg("phi") = v.phi, py::arg("vol_term") = v.vol_term,
                        py::arg("bdry_term") = v.bdry_term);
      },
      py::arg("field"), py::arg("model"), py::arg("dim"), py::arg("beta"), py::arg("r"),
      py::arg("x0") = std::vector<double>{}, py::arg("params") = Params{});

  mod.def(
      "phi_scan",
      [](const std::string& field, const Model& model, int dim, double beta, double r_min, double r_max, int n_r,
         const Params& params) {
        const auto u = exact_sampler(field, dim, params);
        return json_to_py(to_json(phi_scan(*u, model, {}, beta, r_min, r_max, n_r)));
      },
      py::arg("field"), py::arg("model"), py::arg("dim"), py::arg("beta"), py::arg("r_min"), py::arg("r_max"),
      py::arg("n_r"), py::arg("params") = Params{});

  mod.def(
      "psi",
      [](const std::string& field, const Model& model, int dim, double T, double beta, double r,
         const std::string& side, const Params& params) {
        const auto u = exact_spacetime_sampler(field, dim, params);
        const PsiValue v = psi(*u, model, T, {}, beta, r, side_from_name(side));
        return py::dict(py::arg("r") = v.r, py::arg("psi") = v.psi, py::arg("energy_term") = v.energy_term,
                        py::arg("u2_term") = v.u2_term, py::arg("tail_bound") = v.tail_bound);
      },
      py::arg("field"), py::arg("model"), py::arg("dim"), py::arg("T"), py::arg("beta"), py::arg("r"),
      py::arg("side") = "minus", py::arg("params") = Params{});

  mod.def(
      "homogeneity_residual",
      [](const std::string& field, int dim, double beta, double r_in, double r_out, const Params& params) {
        return homogeneity_residual(*exact_sampler(field, dim, params), {}, beta, r_in, r_out);
      },
      py::arg("field"), py::arg("dim"), py::arg("beta"), py::arg("r_in"), py::arg("r_out"),
      py::arg("params") = Params{});

  mod.def(
      "run",
      [](const std::string& path, const std::vector<std::string>& overrides) {
        RunOutcome out;
        {
          py::gil_scoped_release release;
          out = run_file(path, overrides);
        }
        return py::dict(py::arg("exit_code") = out.exit_code, py::arg("task") = out.task,
                        py::arg("message") = out.message, py::arg("files") = out.files,
                        py::arg("report") = json_to_py(out.report));
      },
      py::arg("config"), py::arg("overrides") = std::vector<std::string>{});

  mod.def(
      "selftest",
      [](const std::string& convention, int sphere_nodes, bool rerun) {
        SelftestOptions opt;
        opt.convention = convention_from_name(convention);
        opt.sphere_nodes = sphere_nodes;
        opt.determinism_rerun = rerun;
        SelftestReport rep;
        {
          py::gil_scoped_release release;
          rep = selftest(opt);
        }
        return json_to_py(to_json(rep));
      },
      py::arg("convention") = "signed_abs_exponent", py::arg("sphere_nodes") = 0, py::arg("rerun") = false);
}
