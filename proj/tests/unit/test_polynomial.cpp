#include "common.hpp"

#include <Eigen/Eigenvalues>

#include "dunkl/polynomial.hpp"
#include "dunkl/root_system.hpp"
#include "dunkl/weyl_group.hpp"

using namespace dunkl;

TEST_SUITE("polynomial") {
  TEST_CASE("arithmetic and evaluation") {
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    const Polynomial p = x * x * 3.0 + x * y - 2.0 * y + Polynomial::constant(2, 5.0);
    CHECK(p.degree() == 2);
    CHECK(p((Vec(2) << 2, -1).finished()) == doctest::Approx(12 - 2 + 2 + 5));
    CHECK(p.coefficient({1, 1}) == 1.0);
    CHECK((p - p).pruned().degree() == -1);
  }

  TEST_CASE("compose matches pointwise evaluation") {
    std::mt19937_64 g(1);
    const Polynomial x = Polynomial::variable(3, 0), z = Polynomial::variable(3, 2);
    const Polynomial p = x * x * z + 2.0 * z * z * z - x;
    const Mat m = Mat::Random(3, 3);
    const Polynomial q = p.compose(m);
    for (int k = 0; k < 5; ++k) {
      const Vec v = random_vec(g, 3);
      CHECK(q(v) == doctest::Approx(p(m * v)).epsilon(1e-12));
    }
  }

  TEST_CASE("monomial basis sizes") {
    CHECK(monomial_basis(3, 2).size() == 6);
    CHECK(monomial_basis(2, 3).size() == 4);
    CHECK(monomial_basis(4, 0).size() == 1);
  }

  TEST_CASE("group average is an orthogonal projector onto invariants") {
    const RootSystem r = builtin_system("b:2");
    const WeylGroup w = weyl_group(r);
    for (int d = 0; d <= 4; ++d) {
      const Mat b = group_average_matrix(w, d);
      CHECK((b * b - b).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((b - b.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
    // x² + y² is invariant; x is averaged away.
    const Polynomial x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    CHECK(distance(group_average(w, x * x + y * y), x * x + y * y) < 1e-14);
    CHECK(group_average(w, x).pruned(1e-14).degree() == -1);
  }

  TEST_CASE("reflection average fixes invariants and contracts the rest") {
    const RootSystem r = builtin_system("a:3");
    const WeylGroup w = weyl_group(r);
    for (int d = 1; d <= 3; ++d) {
      const Mat a = reflection_average_matrix(r, d);
      const Mat b = group_average_matrix(w, d);
      CHECK((a * b - b).cwiseAbs().maxCoeff() < 1e-12);
      Eigen::SelfAdjointEigenSolver<Mat> es(a);
      CHECK(es.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
      CHECK(es.eigenvalues().minCoeff() >= -1.0 - 1e-12);
    }
  }
}
