#include "dunkl/exact1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dunkl/bessel.hpp"
#include "dunkl/errors.hpp"
#include "dunkl/intertwine.hpp"
#include "dunkl/quadrature.hpp"

namespace dunkl {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check(double t, double beta) {
  if (!(t > 0.0)) throw ValidationError("t must be positive");
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
}

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

void check_init(const Initial1D& init) {
  if (init.points.empty() || init.points.size() != init.weights.size())
    throw ValidationError("initial law needs matching points and weights");
}

QuadOptions quad_opts() {
  QuadOptions o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-12;
  return o;
}

}  // namespace

double Initial1D::max_abs() const {
  double m = 0.0;
  for (double x : points) m = std::max(m, std::abs(x));
  return m;
}

double log_tpd_b1(double t, double y, double x, double beta) {
  check(t, beta);
  if (y == 0.0) return kNegInf;
  if (x < 0.0) return log_tpd_b1(t, -y, -x, beta);
  const double nu = 0.5 * (beta - 1.0);
  const double base = -(x * x + y * y) / (2.0 * t) - std::log(2.0 * t) + beta * std::log(std::abs(y));
  if (x == 0.0) {
    // (xy)^{−ν} I_ν(xy/t) → (2t)^{−ν}/Γ(ν+1); the I_{ν+1} term vanishes.
    return base - nu * std::log(2.0 * t) - std::lgamma(nu + 1.0);
  }
  const double w = x * std::abs(y) / t;
  const double li = log_bessel_i(nu, w);
  const double li1 = log_bessel_i(nu + 1.0, w);
  const double pre = -nu * std::log(x * std::abs(y));
  if (y > 0.0) return base + pre + log_add(li, li1);
  // I_ν(−w) (xy)^{−ν} is even in xy, the I_{ν+1} term odd.
  return base + pre + li + std::log1p(-std::exp(li1 - li));
}

double tpd_b1(double t, double y, double x, double beta) { return std::exp(log_tpd_b1(t, y, x, beta)); }

double log_c_beta_b1(double beta) {
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  return 0.5 * (beta + 1.0) * std::log(2.0) + std::lgamma(0.5 * (beta + 1.0));
}

double log_tpd_b1_general(double t, double y, double x, double beta) {
  check(t, beta);
  if (y == 0.0) return kNegInf;
  return -(x * x + y * y) / (2.0 * t) - log_c_beta_b1(beta) - 0.5 * (1.0 + beta) * std::log(t) +
         beta * std::log(std::abs(y)) + log_kernel_exact_b1(beta, x * y / t);
}

double tpd_b1_general(double t, double y, double x, double beta) {
  return std::exp(log_tpd_b1_general(t, y, x, beta));
}

double scaled_density_1d(double t, double y_scaled, double x0, double beta) {
  check(t, beta);
  const double s = std::sqrt(beta * t);
  return std::exp(std::log(s) + log_tpd_b1(t, s * y_scaled, x0, beta));
}

double scaled_density_1d(double t, double y_scaled, const Initial1D& init, double beta) {
  check_init(init);
  double f = 0.0;
  for (std::size_t k = 0; k < init.points.size(); ++k)
    f += init.weights[k] * scaled_density_1d(t, y_scaled, init.points[k], beta);
  return f;
}

double steady_density_1d(double beta, double y) {
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  if (y == 0.0) return 0.0;
  // z_β = 2·(2/β)^{(β+1)/2}·Γ((β+1)/2)/2 = (2/β)^{(β+1)/2} Γ((β+1)/2).
  const double log_z = 0.5 * (beta + 1.0) * std::log(2.0 / beta) + std::lgamma(0.5 * (beta + 1.0));
  return std::exp(-0.5 * beta * y * y + beta * std::log(std::abs(y)) - log_z);
}

Domain1D scaled_domain_1d(double t, const Initial1D& init, double beta) {
  check(t, beta);
  check_init(init);
  const double shift = init.max_abs() / std::sqrt(beta * t);
  const double half = std::sqrt(80.0 / beta) + shift + 5.0;
  Domain1D d{-half, half, {0.0, 1.0, -1.0}};
  for (double x : init.points) d.breaks.push_back(x / std::sqrt(beta * t));
  const double eps = init.max_abs() * init.max_abs() / (beta * t);
  if (eps < 1.0) {
    d.breaks.push_back(1.0 / std::sqrt(1.0 - eps));
    d.breaks.push_back(-1.0 / std::sqrt(1.0 - eps));
  }
  return d;
}

double expectation_1d(const std::function<double(double)>& phi, double t, double x0, double beta) {
  return expectation_1d(phi, t, Initial1D::point(x0), beta);
}

double expectation_1d(const std::function<double(double)>& phi, double t, const Initial1D& init, double beta) {
  const Domain1D d = scaled_domain_1d(t, init, beta);
  auto g = [&](double y) {
    const double f = scaled_density_1d(t, y, init, beta);
    return f == 0.0 ? 0.0 : phi(y) * f;
  };
  return integrate(g, d.lo, d.hi, d.breaks, quad_opts()).value;
}

double steady_expectation_1d(const std::function<double(double)>& phi, double beta) {
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  const double half = std::sqrt(80.0 / beta) + 5.0;
  auto g = [&](double y) {
    const double f = steady_density_1d(beta, y);
    return f == 0.0 ? 0.0 : phi(y) * f;
  };
  return integrate(g, -half, half, {0.0, 1.0, -1.0}, quad_opts()).value;
}

Density1D make_scaled_density_1d(double t, const Initial1D& init, double beta) {
  const Domain1D d = scaled_domain_1d(t, init, beta);
  Density1D out;
  out.evaluator = [t, init, beta](double y) { return scaled_density_1d(t, y, init, beta); };
  out.lo = d.lo;
  out.hi = d.hi;
  out.mass = integrate(out.evaluator, d.lo, d.hi, d.breaks, quad_opts()).value;
  return out;
}

Density1D make_steady_density_1d(double beta) {
  Density1D out;
  out.evaluator = [beta](double y) { return steady_density_1d(beta, y); };
  out.hi = std::sqrt(80.0 / beta) + 5.0;
  out.lo = -out.hi;
  out.mass = integrate(out.evaluator, out.lo, out.hi, {0.0, 1.0, -1.0}, quad_opts()).value;
  return out;
}

}  // namespace dunkl
