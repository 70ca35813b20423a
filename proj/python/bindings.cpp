#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "dunkl/asymfit.hpp"
#include "dunkl/errors.hpp"
#include "dunkl/exact1d.hpp"
#include "dunkl/intertwine.hpp"
#include "dunkl/io.hpp"
#include "dunkl/polynomial.hpp"
#include "dunkl/potential.hpp"
#include "dunkl/root_system.hpp"
#include "dunkl/simulate.hpp"
#include "dunkl/weyl_group.hpp"

namespace py = pybind11;
using namespace dunkl;

namespace {

Initial1D make_initial_1d(py::object x0, bool symmetrized) {
  if (py::isinstance<py::float_>(x0) || py::isinstance<py::int_>(x0)) {
    const double x = x0.cast<double>();
    return symmetrized ? Initial1D::symmetrized(x) : Initial1D::point(x);
  }
  auto pw = x0.cast<std::pair<std::vector<double>, std::vector<double>>>();
  return {pw.first, pw.second};
}

py::dict estimate_dict(const DensityEstimate& e) {
  py::dict d;
  d["t"] = e.t;
  d["dim"] = e.dim;
  d["bins"] = e.bins;
  d["lo"] = e.lo;
  d["hi"] = e.hi;
  d["joint"] = e.joint;
  d["counts"] = e.counts;
  d["outside"] = e.outside;
  d["n_samples"] = e.n_samples;
  d["raw_moments"] = e.raw_moments;
  d["mean_sq_norm"] = e.mean_sq_norm;
  d["var_sq_norm"] = e.var_sq_norm;
  d["jump_count_mean"] = e.jump_count_mean;
  d["samples"] = e.samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_dunkl, m) {
  m.doc() = "Dunkl processes: root systems, steady states, exact B1 densities, simulation and fits";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  // Route library warnings through Python's warnings module.
  set_warning_handler([](std::string_view msg) {
    py::gil_scoped_acquire gil;
    if (PyErr_WarnEx(PyExc_RuntimeWarning, std::string(msg).c_str(), 1) != 0) PyErr_Clear();
  });

  py::class_<RootSystem>(m, "RootSystem")
      .def_property_readonly("ambient_dim", &RootSystem::ambient_dim)
      .def_property_readonly("rank", &RootSystem::rank)
      .def_property_readonly("gamma", &RootSystem::gamma)
      .def_property_readonly("name", &RootSystem::name)
      .def_property_readonly("roots", &RootSystem::roots)
      .def_property_readonly("kappa", &RootSystem::kappa)
      .def_property_readonly("positive_roots", &RootSystem::positive_roots)
      .def_property_readonly("positive_kappa", &RootSystem::positive_kappa)
      .def_property_readonly("span_basis", &RootSystem::span_basis)
      .def_property_readonly("perp_basis", &RootSystem::perp_basis)
      .def("to_json", [](const RootSystem& r) { return root_system_to_json(r); })
      .def("__repr__", [](const RootSystem& r) {
        std::ostringstream s;
        s << "<RootSystem " << r.name() << " in R^" << r.ambient_dim() << ", gamma=" << r.gamma() << ">";
        return s.str();
      });

  m.def("builtin_system", &builtin_system, py::arg("spec"));
  m.def(
      "custom_system",
      [](const std::vector<Vec>& roots, const std::vector<double>& kappa, std::string name) {
        CustomOptions o;
        o.name = std::move(name);
        return build_custom(roots, kappa, o);
      },
      py::arg("roots"), py::arg("kappa"), py::arg("name") = "custom");
  m.def("root_system_from_json", &root_system_from_json);
  m.def("load_root_system", &load_root_system);
  m.def("schur_sum", &schur_sum);
  m.def("weyl_group_order", [](const RootSystem& r) { return weyl_group(r).size(); });

  py::class_<PeakSet>(m, "PeakSet")
      .def_readonly("points", &PeakSet::points)
      .def_readonly("hessians", &PeakSet::hessians)
      .def_readonly("eigenvalues", &PeakSet::eigenvalues)
      .def_readonly("f_value", &PeakSet::f_value)
      .def_readonly("residuals", &PeakSet::residuals)
      .def_readonly("newton_iterations", &PeakSet::newton_iterations);
  m.def("peak_set", [](const RootSystem& r) { return peak_set(r); });
  m.def("f_r", &f_r);
  m.def("grad_f_r", &grad_f_r);
  m.def("hessian_f_r", &hessian_f_r);
  m.def(
      "log_z_beta",
      [](const RootSystem& r, double beta, const std::string& method) {
        ZMethod z = ZMethod::automatic;
        if (method == "closed_form") z = ZMethod::closed_form;
        else if (method == "quadrature") z = ZMethod::quadrature;
        else if (method == "gaussian") z = ZMethod::gaussian;
        else if (method != "automatic") throw ValidationError("unknown method " + method);
        return log_z_beta(r, beta, z);
      },
      py::arg("r"), py::arg("beta"), py::arg("method") = "automatic");
  m.def("steady_density", &steady_density);
  m.def("steady_ball_mass", &steady_ball_mass);
  m.def("tolerance_radius", &tolerance_radius);

  py::class_<GaussianMixture>(m, "GaussianMixture")
      .def_readonly("centers", &GaussianMixture::centers)
      .def_readonly("precision_matrices", &GaussianMixture::precision_matrices)
      .def_readonly("coefficients", &GaussianMixture::coefficients)
      .def("__call__", &GaussianMixture::operator())
      .def("total_mass", &GaussianMixture::total_mass);
  m.def("gaussian_approx", py::overload_cast<const RootSystem&, double>(&gaussian_approx));
  m.def(
      "gaussian_tilde",
      [](const RootSystem& r, double beta, double t, const Vec& x0, bool symmetrized, const std::string& form) {
        const InitialMixture init = symmetrized ? InitialMixture::symmetrized(r, x0) : InitialMixture::point(x0);
        return gaussian_tilde(r, beta, t, init, form == "linearized" ? TildeForm::linearized : TildeForm::quadratic);
      },
      py::arg("r"), py::arg("beta"), py::arg("t"), py::arg("x0"), py::arg("symmetrized") = false,
      py::arg("form") = "quadratic");

  m.def("m_beta_matrix", [](const RootSystem& r, double beta) { return m_beta_matrix(r, beta); });
  m.def("kernel_exact_b1", &kernel_exact_b1);
  m.def("kernel_large_beta", &kernel_large_beta);
  m.def("kernel_b1_taylor_coefficient", &kernel_b1_taylor_coefficient);

  m.def("tpd_b1", &tpd_b1, py::arg("t"), py::arg("y"), py::arg("x"), py::arg("beta"));
  m.def("tpd_b1_general", &tpd_b1_general, py::arg("t"), py::arg("y"), py::arg("x"), py::arg("beta"));
  m.def(
      "scaled_density_1d",
      [](double t, double y, py::object x0, double beta, bool sym) {
        return scaled_density_1d(t, y, make_initial_1d(x0, sym), beta);
      },
      py::arg("t"), py::arg("y"), py::arg("x0"), py::arg("beta"), py::arg("symmetrized") = false);
  m.def("steady_density_1d", &steady_density_1d);
  m.def(
      "expectation_1d",
      [](const std::function<double(double)>& phi, double t, py::object x0, double beta, bool sym) {
        return expectation_1d(phi, t, make_initial_1d(x0, sym), beta);
      },
      py::arg("phi"), py::arg("t"), py::arg("x0"), py::arg("beta"), py::arg("symmetrized") = false);
  m.def("steady_expectation_1d", &steady_expectation_1d);

  m.def(
      "run_ensemble",
      [](const RootSystem& r, double beta, double horizon, const Vec& x0, std::size_t paths, std::uint64_t seed,
         std::vector<double> record, double dt, int bins, bool keep_samples, bool symmetrized) {
        SimConfig c;
        c.beta = beta;
        c.horizon = horizon;
        c.n_paths = paths;
        c.seed = seed;
        c.record_schedule = std::move(record);
        c.base_dt = dt;
        c.bins = bins;
        c.keep_samples = keep_samples;
        c.initial = symmetrized ? InitialMixture::symmetrized(r, x0) : InitialMixture::point(x0);
        EnsembleResult res;
        {
          py::gil_scoped_release release;
          res = run_ensemble(r, c);
        }
        py::list est;
        for (const auto& e : res.estimates) est.append(estimate_dict(e));
        py::dict d;
        d["estimates"] = est;
        d["stuck_paths"] = res.stuck_paths;
        d["mean_steps"] = res.mean_steps;
        return d;
      },
      py::arg("r"), py::arg("beta"), py::arg("horizon"), py::arg("x0"), py::arg("paths"), py::arg("seed"),
      py::arg("record") = std::vector<double>{}, py::arg("dt") = 0.01, py::arg("bins") = 200,
      py::arg("keep_samples") = false, py::arg("symmetrized") = false);
  m.def("sample_exact_1d", &sample_exact_1d, py::arg("t"), py::arg("x0"), py::arg("beta"), py::arg("n"),
        py::arg("seed"));
  m.def("ks_two_sample", &ks_two_sample);

  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("times", &DecayFit::times)
      .def_readonly("deviations", &DecayFit::deviations)
      .def_readonly("deviation_errors", &DecayFit::deviation_errors)
      .def_readonly("slope", &DecayFit::slope)
      .def_readonly("slope_stderr", &DecayFit::slope_stderr)
      .def_readonly("intercept", &DecayFit::intercept)
      .def_readonly("validity_time", &DecayFit::validity_time)
      .def_readonly("absolute", &DecayFit::absolute);
  m.def(
      "steady_decay_fit",
      [](const std::function<double(double)>& phi, py::object x0, double beta, const std::vector<double>& times,
         bool sym) { return steady_decay_fit(phi, make_initial_1d(x0, sym), beta, times); },
      py::arg("phi"), py::arg("x0"), py::arg("beta"), py::arg("times"), py::arg("symmetrized") = false);

  py::class_<PeakFit>(m, "PeakFit")
      .def_readonly("fitted_center", &PeakFit::fitted_center)
      .def_readonly("fitted_sigma2", &PeakFit::fitted_sigma2)
      .def_readonly("fitted_coefficient", &PeakFit::fitted_coefficient)
      .def_readonly("predicted_center", &PeakFit::predicted_center)
      .def_readonly("predicted_sigma2", &PeakFit::predicted_sigma2)
      .def_readonly("predicted_coefficient", &PeakFit::predicted_coefficient);
  py::class_<MixtureFit>(m, "MixtureFit")
      .def_readonly("peaks", &MixtureFit::peaks)
      .def_readonly("resolved", &MixtureFit::resolved)
      .def("asymmetry", &MixtureFit::asymmetry);
  m.def(
      "freeze_fit_1d",
      [](double beta, double t, py::object x0, bool sym) {
        const Initial1D init = make_initial_1d(x0, sym);
        return freeze_fit_1d([&](double y) { return scaled_density_1d(t, y, init, beta); }, beta, t, init);
      },
      py::arg("beta"), py::arg("t"), py::arg("x0"), py::arg("symmetrized") = false);
  m.def(
      "mechanism_split_1d",
      [](const std::vector<double>& betas, const std::vector<double>& times, py::object x0, bool sym) {
        const MechanismSplit s = mechanism_split(exact_split_grid_1d(betas, times, make_initial_1d(x0, sym)));
        py::dict d;
        d["center_exponent"] = py::make_tuple(s.center_exponent.slope, s.center_exponent.slope_stderr);
        d["variance_exponent"] = py::make_tuple(s.variance_exponent.slope, s.variance_exponent.slope_stderr);
        d["asymmetry_exponent"] = s.asymmetry_fitted
                                      ? py::object(py::make_tuple(s.asymmetry_exponent.slope, s.asymmetry_exponent.slope_stderr))
                                      : py::object(py::none());
        return d;
      },
      py::arg("betas"), py::arg("times"), py::arg("x0"), py::arg("symmetrized") = false);
  m.def(
      "tail_integral",
      [](const std::string& family, double c, double p1, double p2) {
        TailFamily f;
        if (family == "cutoff") f = TailFamily::cutoff;
        else if (family == "stretched_exp") f = TailFamily::stretched_exp;
        else if (family == "power") f = TailFamily::power;
        else throw ValidationError("unknown tail family " + family);
        return tail_integral(f, c, p1, p2);
      },
      py::arg("family"), py::arg("c"), py::arg("p1") = 1.0, py::arg("p2") = 1.0);

  m.def(
      "cli",
      [](const std::vector<std::string>& args) {
        py::gil_scoped_release release;
        return cli::dispatch(args, std::cout, std::cerr);
      },
      py::arg("args"), "Run a dunkl subcommand; returns the exit code");
}
