#include "dunkl/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>

#include "dunkl/errors.hpp"
#include "dunkl/quadrature.hpp"
#include "dunkl/weyl_group.hpp"

namespace dunkl {
namespace {

constexpr double kWall = 1e-300;

void check_dim(const RootSystem& r, const Vec& y) {
  if (y.size() != r.ambient_dim()) throw ValidationError("point has wrong dimension");
}

double wall_product(const Vec& a, const Vec& y) {
  const double p = a.dot(y);
  if (std::abs(p) < kWall) throw ValidationError("on chamber wall");
  return p;
}

// Σ κ log|α·Y|, skipping κ = 0.
double log_vandermonde(const RootSystem& r, const Vec& y) {
  const auto& pos = r.positive_roots();
  const auto& k = r.positive_kappa();
  double s = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (k[i] == 0.0) continue;
    s += k[i] * std::log(std::abs(wall_product(pos[i], y)));
  }
  return s;
}

bool crosses_wall(const RootSystem& r, const Vec& from, const Vec& to) {
  const auto& pos = r.positive_roots();
  const auto& k = r.positive_kappa();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (k[i] == 0.0) continue;
    const double a = pos[i].dot(from), b = pos[i].dot(to);
    if (a * b <= 0.0 || std::abs(b) < kWall) return true;
  }
  return false;
}

Vec interior_start(const RootSystem& r) {
  Vec v = Vec::Zero(r.ambient_dim());
  for (const Vec& a : r.positive_roots()) v += a / a.norm();
  v = r.project_span(v);
  if (v.norm() < 1e-12) v = r.project_span(r.positive_choice());
  return v * (std::sqrt(r.gamma()) / v.norm());
}

Mat span_restrict(const RootSystem& r, const Mat& h) {
  return r.span_basis().transpose() * h * r.span_basis();
}

double log_det_spd(const Mat& m) {
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) throw ValidationError("precision matrix is not positive definite");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// log of ∫_0^∞ ρ^{N−1+βγ} e^{−βρ²/2} dρ.
double log_radial(const RootSystem& r, double beta) {
  const double a = 0.5 * (r.ambient_dim() + beta * r.gamma());
  return std::lgamma(a) + (a - 1.0) * std::log(2.0 / beta) - std::log(beta);
}

double log_z_closed_form(const RootSystem& r, double beta) {
  if (r.ambient_dim() != 1) throw ValidationError("closed-form z_beta needs a one-dimensional system");
  // R = {±a}: z = 2·|a|^{βκ}·radial.
  const double a = std::abs(r.positive_roots().front()[0]);
  const double k = r.positive_kappa().front();
  return std::log(2.0) + beta * k * std::log(a) + log_radial(r, beta);
}

double log_z_quadrature(const RootSystem& r, double beta) {
  const int n = r.ambient_dim();
  const PeakSet peaks = peak_set(r);
  if (n == 1) {
    const double f0 = peaks.f_value;
    const double s = std::abs(peaks.points.front()[0]);
    const double half = s + 40.0 / std::sqrt(beta) + 10.0;
    auto g = [&](double y) {
      if (std::abs(y) < kWall) return 0.0;
      return std::exp(-beta * (0.5 * y * y - log_vandermonde(r, Vec::Constant(1, y)) - f0));
    };
    QuadOptions o;
    o.abs_tol = 0.0;
    const double val = integrate(g, -half, half, {0.0, s, -s}, o).value;
    return std::log(val) - beta * f0;
  }
  if (n != 2) throw ValidationError("quadrature z_beta is limited to N <= 2");
  // Radial part in closed form; the angular factor Π|α·u|^{βκ} by quadrature,
  // split at the walls and the peak directions.
  std::vector<double> breaks;
  auto wrap = [](double th) {
    th = std::fmod(th, 2.0 * std::numbers::pi);
    return th < 0 ? th + 2.0 * std::numbers::pi : th;
  };
  for (const Vec& a : r.positive_roots()) {
    const double th = std::atan2(a[0], -a[1]);
    breaks.push_back(wrap(th));
    breaks.push_back(wrap(th + std::numbers::pi));
  }
  double peak_log = -std::numeric_limits<double>::infinity();
  for (const Vec& s : peaks.points) {
    breaks.push_back(wrap(std::atan2(s[1], s[0])));
    peak_log = std::max(peak_log, beta * log_vandermonde(r, s / s.norm()));
  }
  auto g = [&](double th) {
    Vec u(2);
    u << std::cos(th), std::sin(th);
    double s = 0.0;
    const auto& pos = r.positive_roots();
    const auto& k = r.positive_kappa();
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (k[i] == 0.0) continue;
      const double p = std::abs(pos[i].dot(u));
      if (p < kWall) return 0.0;
      s += k[i] * std::log(p);
    }
    return std::exp(beta * s - peak_log);
  };
  QuadOptions o;
  o.abs_tol = 0.0;
  o.max_intervals = 20000;
  const double ang = integrate(g, 0.0, 2.0 * std::numbers::pi, breaks, o).value;
  return std::log(ang) + peak_log + log_radial(r, beta);
}

double log_z_gaussian(const RootSystem& r, double beta, const PeakSet& peaks) {
  const int n = r.ambient_dim();
  double s = std::log(static_cast<double>(peaks.points.size())) - beta * peaks.f_value;
  for (Eigen::Index j = 0; j < peaks.eigenvalues.front().size(); ++j)
    s += 0.5 * std::log(2.0 * std::numbers::pi / (beta * peaks.eigenvalues.front()[j]));
  s += 0.5 * (n - r.rank()) * std::log(2.0 * std::numbers::pi / beta);
  return s;
}

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be positive");
}

GaussianMixture assemble(const std::vector<Vec>& centers, const std::vector<Mat>& precisions,
                         std::vector<double> coefficients) {
  GaussianMixture g;
  const double w = static_cast<double>(centers.size());
  g.centers = centers;
  g.precision_matrices = precisions;
  g.coefficients = std::move(coefficients);
  for (const Mat& p : precisions) {
    const double n = static_cast<double>(p.rows());
    g.normalizations.push_back(std::exp(0.5 * log_det_spd(p) - 0.5 * n * std::log(2.0 * std::numbers::pi)) / w);
  }
  g.normalization = g.normalizations.empty() ? 0.0 : g.normalizations.front();
  return g;
}

}  // namespace

double f_r(const RootSystem& r, const Vec& y) {
  check_dim(r, y);
  return 0.5 * y.squaredNorm() - log_vandermonde(r, y);
}

Vec grad_f_r(const RootSystem& r, const Vec& y) {
  check_dim(r, y);
  Vec g = y;
  const auto& pos = r.positive_roots();
  const auto& k = r.positive_kappa();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (k[i] == 0.0) continue;
    g -= (k[i] / wall_product(pos[i], y)) * pos[i];
  }
  return g;
}

Mat hessian_f_r(const RootSystem& r, const Vec& y) {
  check_dim(r, y);
  Mat h = Mat::Identity(y.size(), y.size());
  const auto& pos = r.positive_roots();
  const auto& k = r.positive_kappa();
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (k[i] == 0.0) continue;
    const double p = wall_product(pos[i], y);
    h += (k[i] / (p * p)) * pos[i] * pos[i].transpose();
  }
  return h;
}

PeakSet peak_set(const RootSystem& r, const PeakOptions& opts) {
  const Mat& b = r.span_basis();
  Vec y = interior_start(r);
  double f = f_r(r, y);
  double res = grad_f_r(r, y).norm();
  int it = 0;
  for (; it < opts.max_iter && res > opts.grad_tol; ++it) {
    const Vec g = b.transpose() * grad_f_r(r, y);
    const Mat h = span_restrict(r, hessian_f_r(r, y));
    const Vec step = -(b * h.llt().solve(g));
    double lambda = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 60; ++halving, lambda *= 0.5) {
      const Vec trial = y + lambda * step;
      if (crosses_wall(r, y, trial)) continue;
      const double ft = f_r(r, trial);
      // Near the minimum F stalls at rounding level; accept a shrinking gradient instead.
      if (ft < f || (ft <= f + 1e-14 * std::max(1.0, std::abs(f)) && grad_f_r(r, trial).norm() < res)) {
        y = trial;
        f = ft;
        moved = true;
        break;
      }
    }
    res = grad_f_r(r, y).norm();
    if (!moved) break;
  }
  if (!(res <= 1e-10)) {
    std::ostringstream msg;
    msg << "peak solver did not converge after " << it << " iterations (gradient residual " << res << ")";
    throw ConvergenceError(msg.str());
  }

  PeakSet ps;
  ps.newton_iterations = it;
  ps.f_value = f;
  ps.points = reflection_orbit(r, y);
  if (std::any_of(r.positive_kappa().begin(), r.positive_kappa().end(), [](double k) { return k == 0.0; }))
    warn("peak orbit computed with vanishing multiplicities; it can have fewer points than |W|");
  Eigen::SelfAdjointEigenSolver<Mat> es;
  for (const Vec& s : ps.points) {
    Mat h = hessian_f_r(r, s);
    es.compute(span_restrict(r, h), Eigen::EigenvaluesOnly);
    ps.eigenvalues.push_back(es.eigenvalues());
    ps.hessians.push_back(std::move(h));
    ps.residuals.push_back(grad_f_r(r, s).norm());
  }
  return ps;
}

double log_z_beta(const RootSystem& r, double beta, ZMethod method) {
  check_beta(beta);
  if (method == ZMethod::automatic) {
    if (r.ambient_dim() == 1) method = ZMethod::closed_form;
    else if (r.ambient_dim() == 2) method = ZMethod::quadrature;
    else method = ZMethod::gaussian;
  }
  switch (method) {
    case ZMethod::closed_form:
      return log_z_closed_form(r, beta);
    case ZMethod::quadrature:
      return log_z_quadrature(r, beta);
    default: {
      const PeakSet peaks = peak_set(r);
      if (beta * peaks.eigenvalues.front().minCoeff() <= 1.0)
        warn("Laplace approximation of z_beta used at small beta; expect a poor normalization");
      return log_z_gaussian(r, beta, peaks);
    }
  }
}

double z_beta(const RootSystem& r, double beta, ZMethod method) { return std::exp(log_z_beta(r, beta, method)); }

SteadyState::SteadyState(const RootSystem& r, double beta, ZMethod method)
    : r_(r), beta_(beta), log_z_(log_z_beta(r, beta, method)) {}

double SteadyState::log_density(const Vec& y) const {
  check_dim(r_, y);
  const double half = 0.5 * y.squaredNorm();
  const auto& pos = r_.positive_roots();
  const auto& k = r_.positive_kappa();
  double lv = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (k[i] == 0.0) continue;
    const double p = std::abs(pos[i].dot(y));
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    lv += k[i] * std::log(p);
  }
  return -beta_ * (half - lv) - log_z_;
}

double SteadyState::operator()(const Vec& y) const { return std::exp(log_density(y)); }

double steady_density(const RootSystem& r, double beta, const Vec& y) { return SteadyState(r, beta)(y); }

double GaussianMixture::operator()(const Vec& y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Vec d = y - centers[i];
    s += coefficients[i] * normalizations[i] * std::exp(-0.5 * d.dot(precision_matrices[i] * d));
  }
  return s;
}

double GaussianMixture::total_mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double n = static_cast<double>(precision_matrices[i].rows());
    s += coefficients[i] * normalizations[i] *
         std::exp(0.5 * n * std::log(2.0 * std::numbers::pi) - 0.5 * log_det_spd(precision_matrices[i]));
  }
  return s;
}

GaussianMixture gaussian_approx(const RootSystem& r, double beta) { return gaussian_approx(r, beta, peak_set(r)); }

GaussianMixture gaussian_approx(const RootSystem& r, double beta, const PeakSet& peaks) {
  check_beta(beta);
  if (peaks.points.empty()) throw ValidationError("empty peak set");
  check_dim(r, peaks.points.front());
  if (beta * peaks.eigenvalues.front().minCoeff() <= 1.0)
    warn("gaussian_approx: beta * lambda_min <= 1, the peaks are not well separated");
  std::vector<Mat> prec;
  for (const Mat& h : peaks.hessians) prec.push_back(beta * h);
  return assemble(peaks.points, prec, std::vector<double>(peaks.points.size(), 1.0));
}

InitialMixture InitialMixture::symmetrized(const RootSystem& r, const Vec& x0) {
  InitialMixture m;
  m.points = reflection_orbit(r, x0);
  m.weights.assign(m.points.size(), 1.0 / static_cast<double>(m.points.size()));
  return m;
}

Vec InitialMixture::mean() const {
  Vec s = Vec::Zero(points.front().size());
  for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * points[i];
  return s;
}

double InitialMixture::second_moment() const {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * points[i].squaredNorm();
  return s;
}

GaussianMixture gaussian_tilde(const RootSystem& r, double beta, double t, const Vec& x0, TildeForm form) {
  return gaussian_tilde(r, beta, t, InitialMixture::point(x0), form);
}

GaussianMixture gaussian_tilde(const RootSystem& r, double beta, double t, const InitialMixture& init,
                               TildeForm form) {
  return gaussian_tilde(r, beta, t, init, peak_set(r), form);
}

GaussianMixture gaussian_tilde(const RootSystem& r, double beta, double t, const InitialMixture& init,
                               const PeakSet& peaks, TildeForm form) {
  check_beta(beta);
  if (!(t > 0.0)) throw ValidationError("t must be positive");
  if (init.points.empty() || init.points.size() != init.weights.size())
    throw ValidationError("initial mixture needs matching points and weights");
  for (const Vec& x : init.points) require_in_span(r, x);

  const double gamma = r.gamma();
  const double d = r.rank();
  const double bt = beta * t;
  const double x2 = init.second_moment();
  const Vec xbar = init.mean();

  if (beta < 10.0 * d / gamma) warn("gaussian_tilde: beta is not large compared with d_R/gamma");
  if (x2 > 0.0) {
    const double rad = tolerance_radius(r, beta, 1e-3);
    if (bt < 10.0 * d * d * x2 * rad * rad / gamma)
      warn("gaussian_tilde: beta*t is not large compared with d_R^2 x0^2 r^2 / gamma");
  }

  const double eps = x2 / (gamma * bt);
  double shift = 1.0, width = 1.0;  // s̃ = shift·s; span precision multiplied by width
  if (form == TildeForm::linearized) {
    shift = 1.0 + 0.5 * eps;
    width = 1.0 / (1.0 + eps);
  } else {
    if (eps >= 1.0) throw ValidationError("gaussian_tilde: x0^2 >= gamma*beta*t, quadratic form undefined");
    shift = 1.0 / std::sqrt(1.0 - eps);
    width = 1.0 - eps;
  }

  const Mat perp = r.perp_basis() * r.perp_basis().transpose();
  std::vector<Vec> centers;
  std::vector<Mat> prec;
  std::vector<double> coef;
  for (std::size_t i = 0; i < peaks.points.size(); ++i) {
    const Vec& s = peaks.points[i];
    centers.push_back(shift * s);
    // H = (span part) + I_⊥; only the span curvature is rescaled.
    prec.push_back(beta * (width * (peaks.hessians[i] - perp) + perp));
    coef.push_back(1.0 + (d / gamma) * xbar.dot(s) / std::sqrt(bt));
  }
  return assemble(centers, prec, coef);
}

double steady_ball_mass(const RootSystem& r, double beta, double rho) {
  check_beta(beta);
  if (rho <= 0.0) return 0.0;
  const double a = 0.5 * (r.ambient_dim() + beta * r.gamma());
  return boost::math::gamma_p(a, 0.5 * beta * rho * rho);
}

double tolerance_radius(const RootSystem& r, double beta, double delta) {
  check_beta(beta);
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  const double root_gamma = std::sqrt(r.gamma());
  auto mass = [&](double x) { return steady_ball_mass(r, beta, x * root_gamma); };
  double lo = 0.0, hi = 1.0;
  while (mass(hi) < 1.0 - delta) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) < 1.0 - delta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void require_in_span(const RootSystem& r, const Vec& x) {
  if (x.size() != r.ambient_dim()) throw ValidationError("initial point has wrong dimension");
  if (r.project_perp(x).norm() > 1e-9 * std::max(1.0, x.norm()))
    throw ValidationError("initial point is not in Span(R)");
}

}  // namespace dunkl
