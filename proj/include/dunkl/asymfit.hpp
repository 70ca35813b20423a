#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dunkl/exact1d.hpp"
#include "dunkl/potential.hpp"
#include "dunkl/root_system.hpp"
#include "dunkl/simulate.hpp"

namespace dunkl {

/// Least-squares fit of log|deviation| against log t.
struct DecayFit {
  std::vector<double> times;
  std::vector<double> deviations;
  /// Bootstrap standard errors of the deviations (Monte Carlo only; empty otherwise).
  std::vector<double> deviation_errors;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  /// Times below this are outside t ≫ x0²·max(1/(βγr²), βγr²) (r = r(10⁻³)); recorded, not enforced.
  double validity_time = 0.0;
  /// True when ⟨φ⟩ = 0 and the absolute deviation |⟨φ⟩_t| was fitted instead.
  bool absolute = false;
};

/// Slope/intercept/stderr of y = a + b x by ordinary least squares.
struct LineFit {
  double slope, intercept, slope_stderr;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Power-law fit of deviations already computed; throws "signal lost" for values ≤ 1e-12.
DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& deviations);

/// |⟨φ⟩_t/⟨φ⟩ − 1| from exact B_1 quadrature at each time.
DecayFit steady_decay_fit(const std::function<double(double)>& phi, const Initial1D& init, double beta,
                          const std::vector<double>& times);

/// The same from a Monte Carlo ensemble recorded at `times` (config.record_schedule is overridden).
/// `steady_value` is ⟨φ⟩; when it is 0 the absolute deviation is used.
DecayFit steady_decay_fit_mc(const RootSystem& r, const std::function<double(const Vec&)>& phi,
                             double steady_value, SimConfig config, const std::vector<double>& times,
                             int bootstrap = 200);

struct PeakFit {
  Vec fitted_center;
  double fitted_sigma2 = 0.0;
  double fitted_coefficient = 0.0;
  Vec predicted_center;
  double predicted_sigma2 = 0.0;
  double predicted_coefficient = 0.0;
  double center_discrepancy = 0.0;       // |fitted − predicted|
  double sigma2_discrepancy = 0.0;       // relative
  double coefficient_discrepancy = 0.0;  // absolute
};

struct MixtureFit {
  std::vector<PeakFit> peaks;
  int resolved = 0;
  double beta = 0.0, t = 0.0;
  /// Σ_i c_i (x̂0·ŝ_i)/|W|: equals (c₊ − c₋)/2 for B_1.
  double asymmetry() const;
  std::vector<Vec> predicted_directions;  // ŝ_i
  Vec x0_direction;
};

struct FreezeOptions {
  int grid_points = 801;
  double window_factor = 4.0;  // half-width window_factor/√(βλ_min)
  TildeForm form = TildeForm::quadratic;
};

/// Fits c·N(m, σ²)/|W| to a one-dimensional density around each predicted peak
/// by Levenberg–Marquardt. Throws "peaks unresolved" when windows overlap.
MixtureFit freeze_fit_1d(const std::function<double(double)>& density, double beta, double t,
                         const Initial1D& init, const FreezeOptions& opts = {});

/// Fits of G̃ parameters to Monte Carlo samples in any dimension by chamber
/// moments: c_i = |W|·(fraction of samples in the chamber of s_i), center and
/// isotropic variance from the chamber's sample mean and covariance.
MixtureFit freeze_fit(const DensityEstimate& density, const RootSystem& r, double beta, double t,
                      const InitialMixture& init, const FreezeOptions& opts = {});

/// One (β, t) cell for mechanism_split: a fit of f(t, ·) and its t → ∞ baseline at the same β.
struct SplitCell {
  double beta = 0.0, t = 0.0;
  MixtureFit fit;
  MixtureFit baseline;
};

struct MechanismSplit {
  std::vector<double> bt;  // βt per cell
  std::vector<double> center_shift, variance_shift, asymmetry;
  LineFit center_exponent{}, variance_exponent{}, asymmetry_exponent{};
  bool asymmetry_fitted = true;  // false when all asymmetries are ≤ 1e-12 (symmetric start)
};

/// Power laws in βt for the center shift |m − m∞|, variance shift |σ²/σ²∞ − 1|
/// and coefficient asymmetry. Needs ≥ 3 distinct β and t values.
MechanismSplit mechanism_split(const std::vector<SplitCell>& cells);

/// Builds the exact B_1 grid for mechanism_split.
std::vector<SplitCell> exact_split_grid_1d(const std::vector<double>& betas, const std::vector<double>& times,
                                           const Initial1D& init, const FreezeOptions& opts = {});

enum class TailFamily { cutoff, stretched_exp, power };

/// T(C) = ∫_C^∞ τ. cutoff → 0; stretched_exp(l, ξ) → (l/ξ)(l/C)^{ξ−1} e^{−(C/l)^ξ}
/// (leading large-C/l form); power(ζ) → C^{−ζ}/ζ.
double tail_integral(TailFamily family, double c, double p1 = 1.0, double p2 = 1.0);

/// Exact stretched-exponential tail (l/ξ) Γ(1/ξ, (C/l)^ξ).
double tail_integral_exact_stretched(double c, double l, double xi);

}  // namespace dunkl
