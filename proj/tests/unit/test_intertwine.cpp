#include "common.hpp"

#include "dunkl/intertwine.hpp"
#include "dunkl/root_system.hpp"

using namespace dunkl;

TEST_SUITE("intertwine") {
  TEST_CASE("M_beta: closed form equals the direct inverse") {
    for (const char* spec : {"b1", "a:3", "b:3:0.25", "i2:5"}) {
      const RootSystem r = builtin_system(spec);
      for (double beta : {0.5, 2.0, 30.0})
        CHECK((m_beta_matrix(r, beta, MBetaMethod::closed_form) - m_beta_matrix(r, beta, MBetaMethod::direct_inverse))
                  .cwiseAbs()
                  .maxCoeff() < 1e-13);
    }
  }

  TEST_CASE("V_beta on linear functions intertwines T_i with d/dx_i") {
    // T_i (x ↦ x·M y) must equal ∂_i(x·y) = y_i.
    std::mt19937_64 g(5);
    for (const char* spec : {"a:3", "b:2:0.5", "i2:3"}) {
      const RootSystem r = builtin_system(spec);
      const double beta = 2.5;
      const Vec y = r.project_span(random_vec(g, r.ambient_dim()));
      const Mat m = m_beta_matrix(r, beta);
      auto f = [&](const Vec& x) { return x.dot(m * y); };
      const Vec x = random_vec(g, r.ambient_dim());
      for (int i = 0; i < r.ambient_dim(); ++i) CHECK(dunkl_operator(r, beta, f, x, i) == doctest::Approx(y[i]).epsilon(1e-6));
    }
  }

  TEST_CASE("exact B1 kernel: Taylor series, symmetry, bounds") {
    for (double beta : {0.5, 1.0, 4.0, 30.0})
      for (double z : {-1.5, -0.3, 0.2, 1.1}) {
        double sum = 0.0;
        for (int k = 0; k < 60; ++k) sum += kernel_b1_taylor_coefficient(beta, k) * std::pow(z, k);
        CHECK(kernel_exact_b1(beta, z) == doctest::Approx(sum).epsilon(1e-13));
      }
    CHECK(kernel_exact_b1(3.0, 0.0) == 1.0);
    for (double beta : {0.3, 2.0, 100.0})
      for (double z : {-40.0, -2.0, 0.5, 9.0, 300.0}) CHECK(kernel_bounds_check(std::abs(z), kernel_exact_b1(beta, z)));
    // Large-z behaviour stays finite in log space.
    // Γ(ν+1)(z/2)^{−ν}[I_ν + I_{ν+1}] ~ Γ(ν+1)(z/2)^{−ν} 2e^z/√(2πz), ν = 1/2 at β = 2.
    const double z = 5000.0, nu = 0.5;
    const double asym = std::lgamma(nu + 1) - nu * std::log(z / 2) + std::log(2.0) + z - 0.5 * std::log(2 * M_PI * z);
    CHECK(log_kernel_exact_b1(2.0, z) == doctest::Approx(asym).epsilon(1e-7));
  }

  TEST_CASE("large-beta kernel approaches the exact one inside the window") {
    QuietWarnings quiet;
    const RootSystem b1 = builtin_system("b1");
    for (double beta : {100.0, 1000.0}) {
      const Vec x = Vec::Constant(1, 0.8), y = Vec::Constant(1, 0.9);
      const KernelWindow w = large_beta_window(b1, beta, x, y);
      CHECK(w.inside());
      const double exact = kernel_exact_b1(beta, std::sqrt(beta) * x.dot(y));
      CHECK(kernel_large_beta(b1, beta, x, y) == doctest::Approx(exact).epsilon(3.0 / beta));
    }
    CHECK_FALSE(large_beta_window(b1, 2.0, Vec::Constant(1, 1.0), Vec::Constant(1, 1.0)).beta_ok);
  }
}
