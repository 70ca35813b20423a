#include "dunkl/polynomial.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "dunkl/errors.hpp"

namespace dunkl {
namespace {

void check_same(const Polynomial& a, const Polynomial& b) {
  if (a.nvars() != b.nvars()) throw ValidationError("polynomials have different variable counts");
}

double log_factorial_product(const Exponent& e) {
  double s = 0.0;
  for (int k : e) s += std::lgamma(k + 1.0);
  return s;
}

template <class Op>
Mat operator_matrix(int nvars, int degree, Op&& op) {
  const auto basis = monomial_basis(nvars, degree);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Mat m = Mat::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const Exponent& b = basis[static_cast<std::size_t>(col)];
    const double norm_b = std::exp(-0.5 * log_factorial_product(b));
    const Polynomial image = op(Polynomial::monomial(b, norm_b));
    for (Eigen::Index row = 0; row < dim; ++row) {
      const Exponent& a = basis[static_cast<std::size_t>(row)];
      m(row, col) = image.coefficient(a) * std::exp(0.5 * log_factorial_product(a));
    }
  }
  return m;
}

}  // namespace

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(Exponent(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
  Exponent e(static_cast<std::size_t>(nvars), 0);
  e.at(static_cast<std::size_t>(i)) = 1;
  return monomial(e);
}

Polynomial Polynomial::monomial(const Exponent& e, double coef) {
  Polynomial p(static_cast<int>(e.size()));
  p.add_term(e, coef);
  return p;
}

Polynomial Polynomial::linear(const Vec& a) {
  Polynomial p(static_cast<int>(a.size()));
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    Exponent e(static_cast<std::size_t>(a.size()), 0);
    e[static_cast<std::size_t>(i)] = 1;
    p.add_term(e, a[i]);
  }
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    if (c == 0.0) continue;
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  }
  return d;
}

double Polynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const Exponent& e, double coef) {
  if (static_cast<int>(e.size()) != nvars_) throw ValidationError("exponent has wrong arity");
  if (coef == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::operator()(const Vec& x) const {
  if (x.size() != nvars_) throw ValidationError("polynomial evaluated at point of wrong dimension");
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int i = 0; i < nvars_; ++i) t *= std::pow(x[i], e[static_cast<std::size_t>(i)]);
    s += t;
  }
  return s;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  check_same(a, b);
  Polynomial out(a.nvars());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

Polynomial Polynomial::compose(const Mat& m) const {
  if (m.rows() != nvars_ || m.cols() != nvars_) throw ValidationError("compose: matrix size mismatch");
  // powers[i][k] = (row_i(M)·x)^k, built lazily.
  std::vector<std::vector<Polynomial>> powers(static_cast<std::size_t>(nvars_));
  for (int i = 0; i < nvars_; ++i) {
    powers[static_cast<std::size_t>(i)].push_back(constant(nvars_, 1.0));
  }
  auto power = [&](int i, int k) -> const Polynomial& {
    auto& cache = powers[static_cast<std::size_t>(i)];
    while (static_cast<int>(cache.size()) <= k) {
      cache.push_back(cache.back() * linear(m.row(i).transpose()));
    }
    return cache[static_cast<std::size_t>(k)];
  };
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) {
    Polynomial term = constant(nvars_, c);
    for (int i = 0; i < nvars_; ++i) {
      const int k = e[static_cast<std::size_t>(i)];
      if (k > 0) term = term * power(i, k);
    }
    out += term;
  }
  return out;
}

Polynomial Polynomial::pruned(double tol) const {
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_)
    if (std::abs(c) > tol) out.terms_.emplace(e, c);
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same(*this, o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

double distance(const Polynomial& a, const Polynomial& b) {
  check_same(a, b);
  double d = 0.0;
  for (const auto& [e, c] : (a - b).terms()) d = std::max(d, std::abs(c));
  return d;
}

std::vector<Exponent> monomial_basis(int nvars, int degree) {
  if (nvars < 1 || degree < 0) throw ValidationError("monomial_basis: bad arguments");
  std::vector<Exponent> out;
  Exponent cur(static_cast<std::size_t>(nvars), 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == nvars - 1) {
      cur[static_cast<std::size_t>(pos)] = remaining;
      out.push_back(cur);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      cur[static_cast<std::size_t>(pos)] = k;
      rec(pos + 1, remaining - k);
    }
  };
  rec(0, degree);
  return out;
}

Polynomial reflection_average(const RootSystem& r, const Polynomial& p) {
  if (p.nvars() != r.ambient_dim()) throw ValidationError("reflection_average: dimension mismatch");
  Polynomial out(p.nvars());
  const auto& pos = r.positive_roots();
  const auto& k = r.positive_kappa();
  for (std::size_t i = 0; i < pos.size(); ++i) out += p.compose(reflection_matrix(pos[i])) * k[i];
  return out * (1.0 / r.gamma());
}

Polynomial group_average(const WeylGroup& w, const Polynomial& p) {
  if (p.nvars() != w.dim()) throw ValidationError("group_average: dimension mismatch");
  Polynomial out(p.nvars());
  // ρ p(x) = p(ρ^{-1} x) = p(ρ^T x) for orthogonal ρ.
  for (const Mat& g : w.elements()) out += p.compose(g.transpose());
  return out * (1.0 / static_cast<double>(w.size()));
}

Mat reflection_average_matrix(const RootSystem& r, int degree) {
  return operator_matrix(r.ambient_dim(), degree,
                         [&](const Polynomial& p) { return reflection_average(r, p); });
}

Mat group_average_matrix(const WeylGroup& w, int degree) {
  return operator_matrix(w.dim(), degree, [&](const Polynomial& p) { return group_average(w, p); });
}

}  // namespace dunkl
