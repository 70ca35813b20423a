#pragma once

#include <functional>
#include <vector>

namespace dunkl {

/// Initial law for the one-dimensional process: Σ_k w_k δ(x − x_k).
struct Initial1D {
  std::vector<double> points;
  std::vector<double> weights;
  static Initial1D point(double x0) { return {{x0}, {1.0}}; }
  static Initial1D symmetrized(double x0) { return {{x0, -x0}, {0.5, 0.5}}; }
  double max_abs() const;
};

/// B_1 transition density from the closed Bessel form
/// e^{−(x²+y²)/2t}/(2t) · |y|^β (xy)^{−(β−1)/2} [I_{(β+1)/2}(xy/t) + I_{(β−1)/2}(xy/t)],
/// continued to xy ≤ 0 by parity and to xy = 0 by its limit. Evaluated in log space.
double log_tpd_b1(double t, double y, double x, double beta);
double tpd_b1(double t, double y, double x, double beta);

/// The same density assembled from the general template
/// e^{−(x²+y²)/2t} w(y) V_β e^{xy/t} / (c_β t^{(1+β)/2}) with the exact B_1 kernel.
double log_tpd_b1_general(double t, double y, double x, double beta);
double tpd_b1_general(double t, double y, double x, double beta);

/// c_β = ∫ e^{−y²/2}|y|^β dy = 2^{(β+1)/2} Γ((β+1)/2).
double log_c_beta_b1(double beta);

/// f(t, Y) = √(βt) p(t, √(βt) Y | x0).
double scaled_density_1d(double t, double y_scaled, double x0, double beta);
double scaled_density_1d(double t, double y_scaled, const Initial1D& init, double beta);

/// e^{−βY²/2}|Y|^β / z_β.
double steady_density_1d(double beta, double y);

/// Integration range and break points for the scaled density.
struct Domain1D {
  double lo, hi;
  std::vector<double> breaks;
};
Domain1D scaled_domain_1d(double t, const Initial1D& init, double beta);

double expectation_1d(const std::function<double(double)>& phi, double t, double x0, double beta);
double expectation_1d(const std::function<double(double)>& phi, double t, const Initial1D& init, double beta);
double steady_expectation_1d(const std::function<double(double)>& phi, double beta);

/// A density evaluator with its integration range and numerically integrated mass.
struct Density1D {
  std::function<double(double)> evaluator;
  double lo = 0.0, hi = 0.0;
  double mass = 0.0;
};
Density1D make_scaled_density_1d(double t, const Initial1D& init, double beta);
Density1D make_steady_density_1d(double beta);

}  // namespace dunkl
