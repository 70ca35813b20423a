#include "common.hpp"

#include "dunkl/asymfit.hpp"
#include "dunkl/quadrature.hpp"

using namespace dunkl;

TEST_SUITE("asymfit") {
  TEST_CASE("line and power-law fits") {
    const LineFit l = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
    CHECK(l.slope == doctest::Approx(2.0));
    CHECK(l.intercept == doctest::Approx(1.0));
    CHECK(l.slope_stderr < 1e-12);
    const DecayFit d = fit_decay({1, 10, 100, 1000}, {3, 3 / std::sqrt(10.0), 0.3, 3 / std::sqrt(1000.0)});
    CHECK(d.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK_THROWS_WITH_AS(fit_decay({1, 10, 100, 1000}, {1, 1e-3, 1e-13, 1e-14}), "signal lost", ConvergenceError);
    CHECK_THROWS_AS(fit_decay({1, 2, 3, 4}, {1, 1, 1, 1}), ValidationError);
  }

  TEST_CASE("exact decay exponents and window robustness") {
    auto phi = [](double y) { return y + 1.0; };
    const DecayFit a = steady_decay_fit(phi, Initial1D::point(2.0), 1.0, {10, 1e2, 1e3, 1e4});
    const DecayFit b = steady_decay_fit(phi, Initial1D::point(2.0), 1.0, {1e2, 1e3, 1e4, 1e5});
    CHECK(a.slope == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(std::abs(a.slope - b.slope) < 0.05);
    CHECK(std::exp(a.intercept) == doctest::Approx(2.0).epsilon(1e-6));  // deviation = 2/√t at β = 1
    CHECK(a.validity_time > 0.0);
    const DecayFit s = steady_decay_fit([](double y) { return y * y; }, Initial1D::symmetrized(2.0), 6.0, {1e2, 1e3, 1e4, 1e5});
    CHECK(s.slope == doctest::Approx(-1.0).epsilon(0.15));
    const DecayFit z = steady_decay_fit([](double y) { return y; }, Initial1D::point(2.0), 6.0, {1e2, 1e3, 1e4, 1e5});
    CHECK(z.absolute);
  }

  TEST_CASE("freeze fit recovers the parameters of its own model") {
    QuietWarnings quiet;
    const double beta = 100.0, t = 10.0;
    const Initial1D init = Initial1D::point(2.0);
    const RootSystem b1 = builtin_system("b1");
    const GaussianMixture g = gaussian_tilde(b1, beta, t, Vec::Constant(1, 2.0), TildeForm::quadratic);
    const MixtureFit f = freeze_fit_1d([&](double y) { return g(Vec::Constant(1, y)); }, beta, t, init);
    REQUIRE(f.peaks.size() == 2);
    for (const PeakFit& p : f.peaks) {
      CHECK(p.center_discrepancy < 1e-9);
      CHECK(p.sigma2_discrepancy < 1e-9);
      CHECK(p.coefficient_discrepancy < 1e-9);
    }
    CHECK(f.asymmetry() == doctest::Approx(2.0 / std::sqrt(1000.0)).epsilon(1e-9));
  }

  TEST_CASE("freeze fit on exact densities") {
    QuietWarnings quiet;
    const Initial1D init = Initial1D::point(2.0);
    const MixtureFit f = freeze_fit_1d([&](double y) { return scaled_density_1d(10.0, y, init, 100.0); }, 100.0, 10.0, init);
    for (const PeakFit& p : f.peaks) {
      const double s = p.predicted_center[0] > 0 ? 1.0 : -1.0;
      CHECK(std::abs(p.fitted_coefficient - (1.0 + s * 2.0 / std::sqrt(1000.0))) < 1e-3);
      CHECK(std::abs(p.fitted_sigma2 - 1.004 / 200.0) < 2e-4);
    }
    // Starting at the origin, G~ = G and the fit sees the steady state.
    const Initial1D origin = Initial1D::point(0.0);
    const MixtureFit z = freeze_fit_1d([&](double y) { return scaled_density_1d(10.0, y, origin, 400.0); }, 400.0, 10.0, origin);
    for (const PeakFit& p : z.peaks) {
      CHECK(p.coefficient_discrepancy < 1e-3);
      CHECK(p.center_discrepancy < 2e-3);
    }
    CHECK_THROWS_WITH_AS(freeze_fit_1d([](double) { return 0.1; }, 2.0, 10.0, init), "peaks unresolved", ValidationError);
  }

  TEST_CASE("mechanism split") {
    QuietWarnings quiet;
    const auto cells = exact_split_grid_1d({50, 200, 800}, {5, 20, 80}, Initial1D::point(2.0));
    const MechanismSplit m = mechanism_split(cells);
    CHECK(std::abs(m.center_exponent.slope + 1.0) < 0.05);
    CHECK(std::abs(m.variance_exponent.slope + 1.0) < 0.05);
    CHECK(std::abs(m.asymmetry_exponent.slope + 0.5) < 0.05);
    const MechanismSplit s = mechanism_split(exact_split_grid_1d({50, 200, 800}, {5, 20, 80}, Initial1D::symmetrized(2.0)));
    CHECK_FALSE(s.asymmetry_fitted);
    CHECK(std::abs(s.center_exponent.slope + 1.0) < 0.05);
    const auto few = exact_split_grid_1d({50, 200}, {5, 20, 80}, Initial1D::point(2.0));
    CHECK_THROWS_AS(mechanism_split(few), ValidationError);
  }

  TEST_CASE("tail integrals") {
    CHECK(tail_integral(TailFamily::power, 10.0, 2.0) == doctest::Approx(0.005));
    CHECK(tail_integral(TailFamily::cutoff, 3.0) == 0.0);
    for (double c : {1.0, 5.0, 20.0}) {
      const double q = integrate([](double x) { return std::exp(-x); }, c, c + 60.0).value;
      CHECK(std::abs(tail_integral(TailFamily::stretched_exp, c, 1.0, 1.0) - q) < 1e-10);
    }
    // Leading form against the exact incomplete-gamma tail for large C/l.
    CHECK(tail_integral(TailFamily::stretched_exp, 50.0, 1.0, 0.5) ==
          doctest::Approx(tail_integral_exact_stretched(50.0, 1.0, 0.5)).epsilon(0.2));
    CHECK_THROWS_AS(tail_integral(TailFamily::power, 2.0, -1.0), ValidationError);
    CHECK_THROWS_AS(tail_integral(TailFamily::stretched_exp, 2.0, 0.0, 1.0), ValidationError);
  }
}
