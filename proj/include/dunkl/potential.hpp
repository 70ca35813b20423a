#pragma once

#include <vector>

#include "dunkl/root_system.hpp"
#include "dunkl/types.hpp"

namespace dunkl {

/// F_R(Y) = Y²/2 − Σ_{α∈R_+} κ(α) log|α·Y|. Roots with κ = 0 are skipped.
/// Throws ValidationError("on chamber wall") when some |α·Y| < 1e-300.
double f_r(const RootSystem& r, const Vec& y);
Vec grad_f_r(const RootSystem& r, const Vec& y);
Mat hessian_f_r(const RootSystem& r, const Vec& y);

struct PeakSet {
  std::vector<Vec> points;
  std::vector<Mat> hessians;
  /// Ascending spectra of H restricted to Span(R).
  std::vector<Vec> eigenvalues;
  double f_value = 0.0;
  std::vector<double> residuals;
  int newton_iterations = 0;
};

struct PeakOptions {
  int max_iter = 200;
  double grad_tol = 1e-13;
};

/// Damped Newton on Span(R) from the chamber interior, then the orbit under W.
PeakSet peak_set(const RootSystem& r, const PeakOptions& opts = {});

enum class ZMethod { automatic, closed_form, quadrature, gaussian };

/// log z_β = log ∫ e^{−βF_R}. Closed form for N = 1; quadrature for N ≤ 2
/// (radial part exactly, angle numerically); Laplace approximation otherwise.
double log_z_beta(const RootSystem& r, double beta, ZMethod method = ZMethod::automatic);
double z_beta(const RootSystem& r, double beta, ZMethod method = ZMethod::automatic);

/// The steady state e^{−βF_R(Y)}/z_β with z_β computed once.
class SteadyState {
 public:
  SteadyState(const RootSystem& r, double beta, ZMethod method = ZMethod::automatic);
  double operator()(const Vec& y) const;
  double log_density(const Vec& y) const;
  double log_z() const { return log_z_; }
  double beta() const { return beta_; }

 private:
  RootSystem r_;
  double beta_;
  double log_z_;
};

double steady_density(const RootSystem& r, double beta, const Vec& y);

/// Σ_i c_i · n_i · exp(−½ (Y − m_i)ᵀ P_i (Y − m_i)) with n_i = √det(P_i/2π) / |W|.
struct GaussianMixture {
  std::vector<Vec> centers;
  std::vector<Mat> precision_matrices;
  std::vector<double> coefficients;
  std::vector<double> normalizations;
  /// n_1, the prefactor shared by every component of G_β.
  double normalization = 0.0;

  double operator()(const Vec& y) const;
  /// Analytic ∫ over R^N: Σ c_i n_i (2π)^{N/2} / √det P_i.
  double total_mass() const;
};

/// G_β: centers at the peaks, precisions βH(s_i), unit coefficients.
GaussianMixture gaussian_approx(const RootSystem& r, double beta);
GaussianMixture gaussian_approx(const RootSystem& r, double beta, const PeakSet& peaks);

enum class TildeForm {
  /// s̃ = (1 + ε/2)s, λ̃ = λ/(1 + ε), ε = x0²/(γβt).
  linearized,
  /// s̃ = s/√(1 − ε), λ̃ = λ(1 − ε): the 1-d closed form, extended to any R.
  quadratic,
};

/// Initial condition: point masses x_k ∈ Span(R) with weights w_k (summing to 1).
struct InitialMixture {
  std::vector<Vec> points;
  std::vector<double> weights;
  static InitialMixture point(const Vec& x0) { return {{x0}, {1.0}}; }
  /// ½δ_{x0} + ½δ_{−x0}-style average over the W-orbit of x0.
  static InitialMixture symmetrized(const RootSystem& r, const Vec& x0);
  Vec mean() const;
  double second_moment() const;
};

/// G̃_β for a point or mixture initial condition. Warns (never throws) when
/// β or βt fall outside the regime where the approximation is meaningful.
GaussianMixture gaussian_tilde(const RootSystem& r, double beta, double t, const InitialMixture& init,
                               TildeForm form = TildeForm::linearized);
GaussianMixture gaussian_tilde(const RootSystem& r, double beta, double t, const Vec& x0,
                               TildeForm form = TildeForm::linearized);
GaussianMixture gaussian_tilde(const RootSystem& r, double beta, double t, const InitialMixture& init,
                               const PeakSet& peaks, TildeForm form = TildeForm::linearized);

/// Steady-state mass inside |Y| < ρ. The radial law separates from the
/// angular one, so this is P((N+βγ)/2, βρ²/2) for every system.
double steady_ball_mass(const RootSystem& r, double beta, double rho);

/// r(δ): the steady-state mass inside |Y| < r√γ equals 1 − δ. Bisection on r.
double tolerance_radius(const RootSystem& r, double beta, double delta);

/// Throws ValidationError unless x lies in Span(R) (projection residual ≤ 1e-9·max(1,|x|)).
void require_in_span(const RootSystem& r, const Vec& x);

}  // namespace dunkl
