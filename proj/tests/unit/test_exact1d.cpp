#include "common.hpp"

#include "dunkl/exact1d.hpp"
#include "dunkl/quadrature.hpp"

using namespace dunkl;

TEST_SUITE("exact1d") {
  TEST_CASE("both forms of the transition density agree") {
    for (double beta : {0.5, 1.0, 6.0, 80.0})
      for (double t : {0.1, 1.0, 30.0})
        for (double x : {-2.0, 0.0, 0.7, 5.0})
          for (double y : {-3.0, -0.2, 0.4, 2.5}) {
            const double a = log_tpd_b1(t, y, x, beta), b = log_tpd_b1_general(t, y, x, beta);
            CHECK(a == doctest::Approx(b).epsilon(1e-11));
          }
  }

  TEST_CASE("parity and normalization") {
    CHECK(tpd_b1(1.3, 0.8, -2.0, 3.0) == doctest::Approx(tpd_b1(1.3, -0.8, 2.0, 3.0)).epsilon(1e-14));
    for (double beta : {1.0, 6.0})
      for (double t : {0.5, 10.0}) {
        const double m = integrate([&](double y) { return tpd_b1(t, y, 2.0, beta); }, -60.0, 60.0, std::vector<double>{0.0}).value;
        CHECK(m == doctest::Approx(1.0).epsilon(1e-11));
      }
    const Density1D d = make_scaled_density_1d(20.0, Initial1D::symmetrized(2.0), 4.0);
    CHECK(d.mass == doctest::Approx(1.0).epsilon(1e-11));
  }

  TEST_CASE("expectation laws") {
    for (double beta : {1.0, 6.0, 100.0})
      for (double t : {2.0, 200.0}) {
        const double e = expectation_1d([](double y) { return y + 1.0; }, t, 2.0, beta);
        CHECK(e == doctest::Approx(1.0 + 2.0 / std::sqrt(beta * t)).epsilon(1e-11));
        // Second moment: ⟨Y²⟩ = (β+1)/β + x0²/(βt).
        const double s = expectation_1d([](double y) { return y * y; }, t, 2.0, beta);
        CHECK(s == doctest::Approx((beta + 1.0) / beta + 4.0 / (beta * t)).epsilon(1e-11));
      }
    CHECK(steady_expectation_1d([](double y) { return y * y; }, 6.0) == doctest::Approx(7.0 / 6.0).epsilon(1e-12));
    CHECK(steady_expectation_1d([](double y) { return y; }, 6.0) == doctest::Approx(0.0).epsilon(1e-13));
  }

  TEST_CASE("scaled density tends to the steady state") {
    const double a = scaled_density_1d(1e6, 0.9, 2.0, 3.0), b = steady_density_1d(3.0, 0.9);
    CHECK(a == doctest::Approx(b).epsilon(5e-3));
    CHECK(scaled_density_1d(5.0, 0.7, 0.0, 3.0) == doctest::Approx(steady_density_1d(3.0, 0.7)).epsilon(1e-12));
  }
}
