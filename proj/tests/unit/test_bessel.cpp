#include "common.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include "dunkl/bessel.hpp"

using namespace dunkl;

TEST_SUITE("bessel") {
  TEST_CASE("matches Boost over orders and arguments") {
    for (double nu : {-0.5, -0.25, 0.0, 0.5, 1.0, 3.5, 14.0, 20.0, 60.0, 400.0})
      for (double z : {1e-6, 1e-2, 0.5, 5.0, 19.0, 30.0, 80.0, 300.0, 650.0}) {
        const double ref = boost::math::cyl_bessel_i(nu, z);
        if (!(ref > 1e-300) || !std::isfinite(ref)) continue;
        CAPTURE(nu);
        CAPTURE(z);
        CHECK(std::abs(log_bessel_i(nu, z) - std::log(ref)) < 1e-12 * std::max(1.0, std::abs(std::log(ref))));
      }
  }

  TEST_CASE("half-integer closed form and the reduced function") {
    for (double z : {0.1, 2.0, 40.0, 500.0}) {
      const double ref = std::log(std::sqrt(2.0 / (M_PI * z))) + z + std::log1p(-std::exp(-2.0 * z)) - std::log(2.0);
      CHECK(log_bessel_i(0.5, z) == doctest::Approx(ref).epsilon(1e-13));
    }
    CHECK(log_bessel_i_reduced(2.5, 0.0) == doctest::Approx(-std::lgamma(3.5)).epsilon(1e-14));
    CHECK(log_bessel_i_reduced(1.0, 3.0) == doctest::Approx(log_bessel_i(1.0, 3.0) - std::log(1.5)).epsilon(1e-14));
    // Beyond the double range the log form stays finite.
    CHECK(std::isfinite(log_bessel_i(2.0, 1e4)));
    CHECK(std::isinf(bessel_i(2.0, 1e4)));
  }

  TEST_CASE("orders below -1/2 are rejected") { CHECK_THROWS_AS(log_bessel_i(-0.75, 1.0), ValidationError); }
}
