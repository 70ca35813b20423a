#pragma once

#include <map>
#include <vector>

#include "dunkl/root_system.hpp"
#include "dunkl/types.hpp"
#include "dunkl/weyl_group.hpp"

namespace dunkl {

using Exponent = std::vector<int>;

/// Sparse real polynomial in `nvars` variables, keyed by exponent multi-index.
class Polynomial {
 public:
  explicit Polynomial(int nvars = 1) : nvars_(nvars) {}

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int i);
  static Polynomial monomial(const Exponent& e, double coef = 1.0);
  /// x ↦ a·x.
  static Polynomial linear(const Vec& a);

  int nvars() const { return nvars_; }
  /// Total degree; −1 for the zero polynomial.
  int degree() const;
  const std::map<Exponent, double>& terms() const { return terms_; }
  double coefficient(const Exponent& e) const;
  void add_term(const Exponent& e, double coef);

  double operator()(const Vec& x) const;

  /// q(x) = p(M x).
  Polynomial compose(const Mat& m) const;

  /// Drops terms with |coef| ≤ tol.
  Polynomial pruned(double tol = 1e-14) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  /// Largest coefficient difference.
  friend double distance(const Polynomial& a, const Polynomial& b);

 private:
  int nvars_;
  std::map<Exponent, double> terms_;
};

/// Exponents of total degree `degree` in `nvars` variables, lexicographically descending.
std::vector<Exponent> monomial_basis(int nvars, int degree);

/// A p = (1/γ) Σ_{α∈R_+} κ(α) σ_α p with σ_α p(x) = p(σ_α x).
Polynomial reflection_average(const RootSystem& r, const Polynomial& p);

/// B p = (1/|W|) Σ_ρ ρ p with ρ p(x) = p(ρ^{-1} x).
Polynomial group_average(const WeylGroup& w, const Polynomial& p);

/// Matrices of A and B on homogeneous polynomials of one degree, in the
/// orthonormal Fischer basis x^a/√(a!). Both operators are symmetric there
/// because reflections act orthogonally on that inner product.
Mat reflection_average_matrix(const RootSystem& r, int degree);
Mat group_average_matrix(const WeylGroup& w, int degree);

}  // namespace dunkl
