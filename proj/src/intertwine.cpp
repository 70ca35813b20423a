#include "dunkl/intertwine.hpp"

#include <cmath>
#include <sstream>

#include "dunkl/bessel.hpp"
#include "dunkl/errors.hpp"

namespace dunkl {
namespace {

void check_beta(double beta, bool allow_zero = false) {
  if (!(beta > 0.0 || (allow_zero && beta == 0.0)) || !std::isfinite(beta))
    throw ValidationError("beta must be positive");
}

double linear_factor(const RootSystem& r, double beta) { return 1.0 / (1.0 + beta * r.gamma() / r.rank()); }

}  // namespace

LinearAction::LinearAction(const RootSystem& r, double beta) : r_(r) {
  check_beta(beta, true);
  factor_ = linear_factor(r, beta);
}

double LinearAction::operator()(const Vec& x, const Vec& y) const {
  if (x.size() != r_.ambient_dim() || y.size() != r_.ambient_dim())
    throw ValidationError("v_beta_linear: dimension mismatch");
  return factor_ * r_.project_span(x).dot(r_.project_span(y)) + r_.project_perp(x).dot(r_.project_perp(y));
}

double v_beta_linear(const RootSystem& r, double beta, const Vec& x, const Vec& y) {
  return LinearAction(r, beta)(x, y);
}

Mat m_beta_matrix(const RootSystem& r, double beta, MBetaMethod method) {
  check_beta(beta, true);
  const int n = r.ambient_dim();
  if (method == MBetaMethod::direct_inverse) {
    const Mat a = Mat::Identity(n, n) + beta * schur_sum(r);
    return a.ldlt().solve(Mat::Identity(n, n));
  }
  const Mat& s = r.span_basis();
  const Mat& p = r.perp_basis();
  Mat m = linear_factor(r, beta) * s * s.transpose();
  if (p.cols() > 0) m += p * p.transpose();
  return m;
}

KernelWindow large_beta_window(const RootSystem& r, double beta, const Vec& x, const Vec& y) {
  KernelWindow w;
  const double d = r.rank();
  const double g = r.gamma();
  w.beta_ratio = beta * g / d;
  w.argument_ratio = d * d * r.project_span(x).squaredNorm() * r.project_span(y).squaredNorm() / (beta * g * g);
  w.beta_ok = w.beta_ratio >= 10.0;
  w.argument_ok = w.argument_ratio <= 0.1;
  return w;
}

double kernel_large_beta(const RootSystem& r, double beta, const Vec& x, const Vec& y) {
  check_beta(beta);
  if (x.size() != r.ambient_dim() || y.size() != r.ambient_dim())
    throw ValidationError("kernel_large_beta: dimension mismatch");
  const KernelWindow w = large_beta_window(r, beta, x, y);
  if (!w.inside()) {
    std::ostringstream msg;
    msg << "kernel_large_beta outside its validity window (beta*gamma/d_R = " << w.beta_ratio
        << ", d_R^2 x^2 y^2/(beta gamma^2) = " << w.argument_ratio << ")";
    warn(msg.str());
  }
  const double d = r.rank();
  const double g = r.gamma();
  const Vec xp = r.project_span(x), yp = r.project_span(y);
  const double perp = r.project_perp(x).dot(r.project_perp(y));
  return (1.0 + d * xp.dot(yp) / (g * std::sqrt(beta))) *
         std::exp(std::sqrt(beta) * perp + xp.squaredNorm() * yp.squaredNorm() / (2.0 * g));
}

double log_kernel_exact_b1(double beta, double z) {
  check_beta(beta);
  const double nu = 0.5 * (beta - 1.0);
  const double az = std::abs(z);
  const double le = log_bessel_i_reduced(nu, az);
  // q = (|z|/2) ẽ_{ν+1}/ẽ_ν = I_{ν+1}(|z|)/I_ν(|z|) ∈ [0, 1).
  const double q = az == 0.0 ? 0.0 : std::exp(std::log(0.5 * az) + log_bessel_i_reduced(nu + 1.0, az) - le);
  return std::lgamma(nu + 1.0) + le + (z >= 0.0 ? std::log1p(q) : std::log1p(-q));
}

double kernel_exact_b1(double beta, double z) { return std::exp(log_kernel_exact_b1(beta, z)); }

double kernel_b1_taylor_coefficient(double beta, int k) {
  check_beta(beta);
  if (k < 0) throw ValidationError("Taylor index must be nonnegative");
  const double nu = 0.5 * (beta - 1.0);
  const int m = k / 2;
  // Even: Γ(ν+1)/(4^m m! Γ(m+ν+1)); odd: Γ(ν+1)/(2·4^m m! Γ(m+ν+2)).
  const double shift = (k % 2 == 0) ? 1.0 : 2.0;
  double l = std::lgamma(nu + 1.0) - m * std::log(4.0) - std::lgamma(m + 1.0) - std::lgamma(m + nu + shift);
  if (k % 2 == 1) l -= std::log(2.0);
  return std::exp(l);
}

bool kernel_bounds_check(double norm_product, double value) {
  const double lo = std::exp(-norm_product), hi = std::exp(norm_product);
  return value >= lo * (1.0 - 1e-12) && value <= hi * (1.0 + 1e-12);
}

bool kernel_bounds_check(const Vec& x, const Vec& y, double value) {
  return kernel_bounds_check(x.norm() * y.norm(), value);
}

double dunkl_operator(const RootSystem& r, double beta, const std::function<double(const Vec&)>& f,
                      const Vec& x, int i) {
  if (i < 0 || i >= r.ambient_dim()) throw ValidationError("dunkl_operator: coordinate out of range");
  const double h = 1e-5 * std::max(1.0, x.norm());
  Vec xp = x, xm = x;
  xp[i] += h;
  xm[i] -= h;
  double out = (f(xp) - f(xm)) / (2.0 * h);
  const double fx = f(x);
  const auto& pos = r.positive_roots();
  const auto& k = r.positive_kappa();
  for (std::size_t j = 0; j < pos.size(); ++j) {
    const double p = pos[j].dot(x);
    if (p == 0.0) throw ValidationError("on chamber wall");
    out += 0.5 * beta * k[j] * pos[j][i] * (fx - f(reflect(pos[j], x))) / p;
  }
  return out;
}

}  // namespace dunkl
