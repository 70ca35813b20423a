// Acceptance checks 1–10. Usage: acceptance [n ...]; prints one PASS/FAIL line per check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "cli.hpp"
#include "dunkl/asymfit.hpp"
#include "dunkl/errors.hpp"
#include "dunkl/exact1d.hpp"
#include "dunkl/intertwine.hpp"
#include "dunkl/polynomial.hpp"
#include "dunkl/potential.hpp"
#include "dunkl/root_system.hpp"
#include "dunkl/simulate.hpp"
#include "dunkl/weyl_group.hpp"
#include "oracles.hpp"

using namespace dunkl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(std::pow(10.0, a + (b - a) * k / (n - 1)));
  return v;
}

Outcome exact_expectation() {
  double worst = 0.0;
  for (double t : {2.0, 20.0, 200.0, 2000.0}) {
    const double e = expectation_1d([](double y) { return y + 1.0; }, t, 2.0, 1.0);
    worst = std::max(worst, std::abs(e / (1.0 + 2.0 / std::sqrt(t)) - 1.0));
  }
  return {worst < 1e-6, fmt("max relative error %.2e (< 1e-6)", worst)};
}

Outcome decay_exponents() {
  const auto times = logspace(2, 5, 7);
  bool ok = true;
  std::ostringstream s;
  for (double beta : {1.0, 6.0}) {
    const DecayFit a = steady_decay_fit([](double y) { return y + 1.0; }, Initial1D::point(2.0), beta, times);
    const DecayFit b = steady_decay_fit([](double y) { return y * y; }, Initial1D::symmetrized(2.0), beta, times);
    ok = ok && std::abs(a.slope + 0.5) <= 0.02 && std::abs(b.slope + 1.0) <= 0.15;
    s << fmt("beta=%g: Y+1 slope %.4f, symmetrized Y^2 slope %.4f; ", beta, a.slope, b.slope);
  }
  return {ok, s.str()};
}

Outcome freeze_corrections() {
  const Initial1D init = Initial1D::point(2.0);
  const MechanismSplit m = mechanism_split(exact_split_grid_1d({50, 200, 800}, {5, 20, 80}, init));
  const MixtureFit f =
      freeze_fit_1d([&](double y) { return scaled_density_1d(10.0, y, init, 100.0); }, 100.0, 10.0, init);
  double worst = 0.0;
  for (const PeakFit& p : f.peaks) {
    const double sign = p.predicted_center[0] > 0 ? 1.0 : -1.0;
    worst = std::max(worst, std::abs(p.fitted_coefficient - (1.0 + sign * 2.0 / std::sqrt(1000.0))));
  }
  const bool ok = std::abs(m.center_exponent.slope + 1.0) <= 0.05 && std::abs(m.variance_exponent.slope + 1.0) <= 0.05 &&
                  std::abs(m.asymmetry_exponent.slope + 0.5) <= 0.05 && worst <= 1e-3;
  return {ok, fmt("exponents center %.4f, variance %.4f, asymmetry %.4f; c+- error %.2e", m.center_exponent.slope,
                  m.variance_exponent.slope, m.asymmetry_exponent.slope, worst)};
}

Outcome peak_sets() {
  const PeakSet b1 = peak_set(builtin_system("b1"));
  double b1_err = 0.0;
  for (const Vec& s : b1.points) b1_err = std::max(b1_err, std::abs(std::abs(s[0]) - 1.0));
  double herm = 0.0, norm = 0.0;
  for (int n = 2; n <= 8; ++n) {
    const RootSystem r = build_a(n);
    const auto h = oracle::hermite_zeros(n);
    for (const Vec& s : peak_set(r).points) {
      std::vector<double> c(s.data(), s.data() + n);
      std::sort(c.begin(), c.end());
      for (int i = 0; i < n; ++i) herm = std::max(herm, std::abs(c[i] - h[i]));
      norm = std::max(norm, std::abs(s.squaredNorm() - r.gamma()));
    }
  }
  for (double nu : {-0.25, 0.5, 2.0})
    for (int n = 1; n <= 5; ++n) {
      const RootSystem r = build_b(n, nu);
      for (const Vec& s : peak_set(r).points) norm = std::max(norm, std::abs(s.squaredNorm() - r.gamma()));
    }
  const bool ok = b1.points.size() == 2 && b1_err <= 1e-12 && herm <= 1e-8 && norm <= 1e-10;
  return {ok, fmt("B1 error %.1e, Hermite error %.1e, |s|^2 - gamma error %.1e", b1_err, herm, norm)};
}

Outcome schur_identity() {
  std::vector<std::string> specs{"b1"};
  for (int n = 2; n <= 8; ++n) specs.push_back("a:" + std::to_string(n));
  for (int n = 2; n <= 5; ++n)
    for (const char* nu : {"-0.25", "0.5", "2"}) specs.push_back("b:" + std::to_string(n) + ":" + nu);
  for (int m = 3; m <= 8; ++m) specs.push_back("i2:" + std::to_string(m) + (m % 2 ? "" : ":1:2.5"));
  double worst = 0.0;
  for (const std::string& sp : specs) {
    const RootSystem r = builtin_system(sp);
    const Mat p = r.span_basis() * r.span_basis().transpose();
    worst = std::max(worst, (schur_sum(r) - (r.gamma() / r.rank()) * p).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-12, fmt("%zu systems, max entry error %.1e", specs.size(), worst)};
}

Outcome tpd_consistency() {
  double worst = 0.0;
  int n = 0;
  for (double t : {0.05, 0.5, 2.0, 10.0, 80.0})
    for (double x : {-3.0, -0.4, 0.0, 1.0, 4.0})
      for (double y : {-2.5, -0.3, 0.2, 1.4, 6.0})
        for (double beta : {0.2, 0.5, 1.0, 2.0, 4.0, 10.0, 50.0, 300.0}) {
          const double a = tpd_b1(t, y, x, beta), b = tpd_b1_general(t, y, x, beta);
          worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
          ++n;
        }
  return {worst < 1e-8, fmt("%d points, max relative difference %.2e", n, worst)};
}

Outcome simulator() {
  const std::size_t paths = 100000;
  // Distribution of Y at t = 20 against the exact inverse-CDF sampler.
  SimConfig c;
  c.beta = 1.0;
  c.horizon = 20.0;
  c.n_paths = paths;
  c.seed = 20240;
  c.initial = InitialMixture::point(Vec::Constant(1, 2.0));
  const EnsembleResult b1 = run_ensemble(builtin_system("b1"), c);
  std::vector<double> sim;
  for (const Vec& y : b1.estimates.front().samples) sim.push_back(y[0]);
  const double ks = ks_two_sample(sim, sample_exact_1d(20.0, 2.0, 1.0, paths, 777));

  auto radial = [&](const RootSystem& r, const Vec& x0) {
    SimConfig rc;
    rc.beta = 4.0;
    rc.horizon = 5.0;
    rc.n_paths = paths;
    rc.seed = 99;
    rc.keep_samples = false;
    rc.record_schedule = {1, 2, 3, 4, 5};
    rc.initial = InitialMixture::point(x0);
    const EnsembleResult e = run_ensemble(r, rc);
    std::vector<double> ts, m;
    for (const DensityEstimate& d : e.estimates) ts.push_back(d.t), m.push_back(d.mean_sq_norm);
    return fit_line(ts, m).slope / (r.ambient_dim() + 4.0 * r.gamma());
  };
  const double ra = radial(builtin_system("a:3"), (Vec(3) << 2, 0, -2).finished());
  const double rb = radial(build_b(2, 0.5), (Vec(2) << 2, 1).finished());
  const bool ok = ks < 0.02 && std::abs(ra - 1.0) < 0.05 && std::abs(rb - 1.0) < 0.05 && b1.stuck_paths == 0;
  return {ok, fmt("KS %.4f (< 0.02), radial slope / (N + beta gamma): A2 %.4f, B2 %.4f, stuck %zu", ks, ra, rb,
                  b1.stuck_paths)};
}

Outcome figures() {
  const fs::path dir = fs::temp_directory_path() / "dunkl_acceptance_figures";
  fs::remove_all(dir);
  std::ostringstream out, err;
  const int code = cli::dispatch({"reproduce-figures", "--fig", "all", "--out", dir.string()}, out, err);
  std::ostringstream s;
  bool ok = code == 0;
  for (int f = 1; f <= 3; ++f) {
    std::ifstream in(dir / ("fig" + std::to_string(f) + "_summary.json"));
    if (!in) return {false, "missing summary for figure " + std::to_string(f)};
    const auto j = nlohmann::json::parse(in);
    for (const auto& set : j["sets"]) ok = ok && fs::exists(dir / set["file"].get<std::string>());
    ok = ok && j["check"]["pass"].get<bool>();
    s << "fig" << f << ": " << j["check"]["name"].get<std::string>() << " = " << j["check"]["value"].get<double>() << "; ";
  }
  return {ok, s.str()};
}

Outcome kernel_bounds() {
  std::mt19937_64 g(2718);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const RootSystem b1 = builtin_system("b1");
  int violations = 0, draws = 0;
  auto prev = set_warning_handler([](std::string_view) {});
  while (draws < 10000) {
    const double beta = std::pow(10.0, 1.0 + 3.0 * u(g));
    // Inside the window: β ≥ 10 and x²y²/β ≤ 0.1.
    const double prod = (2.0 * u(g) - 1.0) * std::sqrt(0.1 * beta);
    const double x = (u(g) < 0.5 ? -1.0 : 1.0) * std::exp(3.0 * (2.0 * u(g) - 1.0));
    const double y = prod / x;
    const Vec xv = Vec::Constant(1, x), yv = Vec::Constant(1, y);
    if (!large_beta_window(b1, beta, xv, yv).inside()) continue;
    ++draws;
    const double z = std::sqrt(beta) * x * y;
    if (!kernel_bounds_check(std::abs(z), kernel_exact_b1(beta, z))) ++violations;
    if (!kernel_bounds_check(std::abs(z), kernel_large_beta(b1, beta, xv, yv))) ++violations;
  }
  set_warning_handler(prev);
  return {violations == 0, fmt("%d draws, %d violations", draws, violations)};
}

Outcome spectral() {
  double worst_range = 0.0, worst_proj = 0.0;
  for (const char* spec : {"b1", "a:3", "b:2"}) {
    const RootSystem r = builtin_system(spec);
    const WeylGroup w = weyl_group(r);
    for (int d = 0; d <= 3; ++d) {
      const Mat a = reflection_average_matrix(r, d);
      const Mat b = group_average_matrix(w, d);
      Eigen::SelfAdjointEigenSolver<Mat> es(a);
      const Vec ev = es.eigenvalues();
      worst_range = std::max({worst_range, ev.maxCoeff() - 1.0, -1.0 - ev.minCoeff()});
      Mat p = Mat::Zero(a.rows(), a.cols());
      for (Eigen::Index k = 0; k < ev.size(); ++k)
        if (std::abs(ev[k] - 1.0) < 1e-9) p += es.eigenvectors().col(k) * es.eigenvectors().col(k).transpose();
      worst_proj = std::max(worst_proj, (p - b).cwiseAbs().maxCoeff());
    }
  }
  return {worst_range <= 1e-12 && worst_proj <= 1e-9,
          fmt("eigenvalues exceed [-1,1] by %.1e; eigenvalue-1 projector vs invariant projector %.1e",
              std::max(worst_range, 0.0), worst_proj)};
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  set_warning_handler([](std::string_view) {});
  const std::vector<Criterion> all{
      {"exact expectation law <Y+1> = 1 + 2/sqrt(t)", 5, exact_expectation},
      {"steady-state decay exponents", 30, decay_exponents},
      {"strong-coupling corrections and c+-", 60, freeze_corrections},
      {"peak sets vs Hermite/Laguerre oracles", 5, peak_sets},
      {"Schur-sum identity", 1, schur_identity},
      {"general transition density vs Bessel form", 10, tpd_consistency},
      {"simulator distribution and radial law", 300, simulator},
      {"figure reproduction", 30, figures},
      {"kernel bounds", 5, kernel_bounds},
      {"reflection-average spectrum", 2, spectral},
  };
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= 10; ++i) which.push_back(i);

  int failures = 0;
  for (int n : which) {
    if (n < 1 || n > 10) {
      std::fprintf(stderr, "no criterion %d\n", n);
      return 2;
    }
    const Criterion& c = all[n - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("CRITERION %d %s: %s | %s | %.2f s (budget %.0f s%s)\n", n, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
