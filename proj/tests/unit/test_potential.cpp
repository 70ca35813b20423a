#include "common.hpp"

#include <algorithm>

#include "dunkl/exact1d.hpp"
#include "dunkl/potential.hpp"
#include "dunkl/quadrature.hpp"
#include "dunkl/root_system.hpp"
#include "oracles.hpp"

using namespace dunkl;

TEST_SUITE("potential") {
  TEST_CASE("gradient and Hessian agree with finite differences") {
    const RootSystem r = builtin_system("b:3:0.5");
    const Vec y = (Vec(3) << 2.1, 1.2, 0.4).finished();
    const double h = 1e-6;
    const Vec g = grad_f_r(r, y);
    const Mat hs = hessian_f_r(r, y);
    for (int i = 0; i < 3; ++i) {
      Vec e = Vec::Zero(3);
      e[i] = h;
      CHECK(g[i] == doctest::Approx((f_r(r, y + e) - f_r(r, y - e)) / (2 * h)).epsilon(1e-8));
      const Vec col = (grad_f_r(r, y + e) - grad_f_r(r, y - e)) / (2 * h);
      CHECK((hs.col(i) - col).norm() < 1e-6);
    }
    CHECK_THROWS_AS(f_r(r, (Vec(3) << 1, 1, 0.5).finished()), ValidationError);
  }

  TEST_CASE("type A peaks are Hermite zeros") {
    for (int n = 2; n <= 8; ++n) {
      const PeakSet p = peak_set(build_a(n));
      std::vector<double> c(p.points.front().data(), p.points.front().data() + n);
      std::sort(c.begin(), c.end());
      const auto h = oracle::hermite_zeros(n);
      for (int i = 0; i < n; ++i) CHECK(c[i] == doctest::Approx(h[i]).epsilon(1e-10));
    }
  }

  TEST_CASE("type B peaks are square roots of Laguerre zeros") {
    for (double nu : {-0.25, 0.5, 2.0})
      for (int n = 1; n <= 5; ++n) {
        const RootSystem r = build_b(n, nu);
        const PeakSet p = peak_set(r);
        std::vector<double> c;
        for (int i = 0; i < n; ++i) c.push_back(std::abs(p.points.front()[i]));
        std::sort(c.begin(), c.end());
        // B_1 is normalized to κ = 1, i.e. ν = 1/2.
        const auto l = oracle::laguerre_zeros(n, n == 1 ? 0.0 : nu - 0.5);
        for (int i = 0; i < n; ++i) CHECK(c[i] == doctest::Approx(std::sqrt(l[i])).epsilon(1e-10));
        for (const Vec& s : p.points) CHECK(std::abs(s.squaredNorm() - r.gamma()) < 1e-10);
      }
  }

  TEST_CASE("peak set size and Hessian spectrum") {
    const PeakSet p = peak_set(builtin_system("i2:5"));
    CHECK(p.points.size() == 10);
    for (const Vec& ev : p.eigenvalues) CHECK(ev.minCoeff() == doctest::Approx(2.0).epsilon(1e-10));
  }

  TEST_CASE("partition function: closed form, quadrature, Laplace") {
    const RootSystem b1 = builtin_system("b1");
    for (double beta : {0.5, 1.0, 6.0, 40.0})
      CHECK(log_z_beta(b1, beta, ZMethod::closed_form) ==
            doctest::Approx(log_z_beta(b1, beta, ZMethod::quadrature)).epsilon(1e-10));
    CHECK(log_z_beta(b1, 1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    const RootSystem b2 = builtin_system("b:2");
    const double q = log_z_beta(b2, 200.0, ZMethod::quadrature), g = log_z_beta(b2, 200.0, ZMethod::gaussian);
    CHECK(std::abs(q - g) < 5e-3);
  }

  TEST_CASE("steady density is normalized") {
    const SteadyState s(builtin_system("b1"), 3.0);
    const double m = integrate([&](double y) { return s(Vec::Constant(1, y)); }, -8.0, 8.0, std::vector<double>{0.0}).value;
    CHECK(m == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("ball mass and tolerance radius") {
    const RootSystem r = builtin_system("a:3");
    for (double beta : {1.0, 10.0}) {
      const double rad = tolerance_radius(r, beta, 1e-3);
      CHECK(steady_ball_mass(r, beta, rad * std::sqrt(r.gamma())) == doctest::Approx(1.0 - 1e-3).epsilon(1e-12));
    }
    // B_1 against direct quadrature of the density.
    const double rho = 1.7;
    const double direct = integrate([](double y) { return steady_density_1d(2.0, y); }, -rho, rho, std::vector<double>{0.0}).value;
    CHECK(steady_ball_mass(builtin_system("b1"), 2.0, rho) == doctest::Approx(direct).epsilon(1e-12));
  }

  TEST_CASE("Gaussian approximations") {
    QuietWarnings quiet;
    const RootSystem r = builtin_system("a:3");
    const GaussianMixture g = gaussian_approx(r, 50.0);
    CHECK(g.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    const Vec zero = Vec::Zero(3);
    const GaussianMixture t0 = gaussian_tilde(r, 50.0, 10.0, zero);
    for (std::size_t i = 0; i < g.centers.size(); ++i) {
      CHECK((t0.centers[i] - g.centers[i]).norm() < 1e-14);
      CHECK(t0.coefficients[i] == 1.0);
    }
    const Vec x0 = (Vec(3) << 2, 0, -2).finished();
    const GaussianMixture sym = gaussian_tilde(r, 50.0, 10.0, InitialMixture::symmetrized(r, x0));
    for (double c : sym.coefficients) CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
    // 1-d quadratic form: centers ±1/√(1 − x0²/(βt)), c± = 1 ± x0/√(βt).
    const GaussianMixture b = gaussian_tilde(builtin_system("b1"), 100.0, 10.0, Vec::Constant(1, 2.0), TildeForm::quadratic);
    for (std::size_t i = 0; i < 2; ++i) {
      const double s = b.centers[i][0] > 0 ? 1.0 : -1.0;
      CHECK(std::abs(b.centers[i][0]) == doctest::Approx(1.0 / std::sqrt(1.0 - 0.004)).epsilon(1e-14));
      CHECK(b.coefficients[i] == doctest::Approx(1.0 + s * 2.0 / std::sqrt(1000.0)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(gaussian_tilde(r, 50.0, 10.0, (Vec(3) << 1, 1, 1).finished()), ValidationError);
  }
}
