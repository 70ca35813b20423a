#include "common.hpp"

#include "dunkl/io.hpp"
#include "dunkl/root_system.hpp"
#include "dunkl/weyl_group.hpp"

using namespace dunkl;

TEST_SUITE("rootsys") {
  TEST_CASE("built-in sizes and gamma") {
    for (int n = 2; n <= 6; ++n) {
      const RootSystem a = build_a(n);
      CHECK(a.roots().size() == static_cast<std::size_t>(n * (n - 1)));
      CHECK(a.gamma() == doctest::Approx(n * (n - 1) / 2.0));
      CHECK(a.rank() == n - 1);
    }
    for (int n = 2; n <= 5; ++n) {
      const double nu = 0.75;
      const RootSystem b = build_b(n, nu);
      CHECK(b.roots().size() == static_cast<std::size_t>(2 * n * n));
      // n(n−1) long roots with κ = 1 and n short ones with κ = ν + 1/2
      CHECK(b.gamma() == doctest::Approx(n * (n - 1) + n * (nu + 0.5)));
    }
    const RootSystem b1 = builtin_system("b1");
    CHECK(b1.gamma() == 1.0);
    CHECK(b1.roots().size() == 2);
    CHECK(build_dihedral(5).roots().size() == 10);
  }

  TEST_CASE("closed under reflection and kappa invariant") {
    for (const char* spec : {"a:4", "b:3:0.25", "i2:6:1:2", "i2:5"}) {
      const RootSystem r = builtin_system(spec);
      for (const Vec& a : r.roots())
        for (const Vec& b : r.roots()) {
          const Vec c = reflect(a, b);
          const auto idx = r.find_root(c);
          REQUIRE(idx.has_value());
          CHECK(r.kappa()[*idx] == doctest::Approx(r.kappa_of(b)));
        }
    }
  }

  TEST_CASE("positive subsystem is half and gamma is choice-independent") {
    std::mt19937_64 g(3);
    const RootSystem r = builtin_system("b:3:2");
    CHECK(2 * r.positive_roots().size() == r.roots().size());
    for (int k = 0; k < 5; ++k) {
      const RootSystem s = r.with_positive_choice(random_vec(g, 3));
      CHECK(s.gamma() == doctest::Approx(r.gamma()));
      for (const Vec& a : s.positive_roots()) CHECK(a.dot(s.positive_choice()) > 0.0);
    }
  }

  TEST_CASE("Schur sum is a multiple of the span projector") {
    for (const char* spec : {"b1", "a:3", "a:6", "b:2", "b:4:-0.25", "i2:3", "i2:8:1:3"}) {
      const RootSystem r = builtin_system(spec);
      const Mat p = r.span_basis() * r.span_basis().transpose();
      CHECK((schur_sum(r) - (r.gamma() / r.rank()) * p).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("Weyl group orders") {
    CHECK(weyl_group(builtin_system("a:3")).size() == 6);
    CHECK(weyl_group(builtin_system("a:4")).size() == 24);
    CHECK(weyl_group(builtin_system("b:2")).size() == 8);
    CHECK(weyl_group(builtin_system("b:3")).size() == 48);
    CHECK(weyl_group(builtin_system("i2:5")).size() == 10);
    CHECK(reflection_orbit(builtin_system("a:4"), (Vec(4) << 3, 1, 0, -4).finished()).size() == 24);
    CHECK_THROWS_AS(weyl_group(builtin_system("a:8"), 1000), ValidationError);
  }

  TEST_CASE("custom systems are validated") {
    std::vector<Vec> bad{(Vec(2) << 1, 0).finished(), (Vec(2) << -1, 0).finished(), (Vec(2) << 1, 1).finished(),
                         (Vec(2) << -1, -1).finished()};
    CHECK_THROWS_WITH_AS(build_custom(bad, {1, 1, 1, 1}), doctest::Contains("not closed"), ValidationError);
    std::vector<Vec> nonreduced{(Vec(1) << 1).finished(), (Vec(1) << -1).finished(), (Vec(1) << 2).finished(),
                                (Vec(1) << -2).finished()};
    CHECK_THROWS_WITH_AS(build_custom(nonreduced, {1, 1, 1, 1}), doctest::Contains("not reduced"), ValidationError);
    std::vector<Vec> a1{(Vec(2) << 1, -1).finished(), (Vec(2) << -1, 1).finished()};
    CHECK_THROWS_AS(build_custom(a1, {1, 2}), ValidationError);
    CHECK_THROWS_AS(builtin_system("q:3"), ValidationError);
  }

  TEST_CASE("JSON round trip") {
    const RootSystem r = builtin_system("b:3:1.5");
    const RootSystem s = root_system_from_json(root_system_to_json(r));
    CHECK(s.ambient_dim() == 3);
    CHECK(s.gamma() == doctest::Approx(r.gamma()));
    CHECK(s.roots().size() == r.roots().size());
    for (const Vec& a : r.roots()) CHECK(s.kappa_of(a) == doctest::Approx(r.kappa_of(a)));
    CHECK_THROWS_AS(root_system_from_json("{\"roots\": 3}"), ValidationError);
  }
}
