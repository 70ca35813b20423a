#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "dunkl/potential.hpp"
#include "dunkl/root_system.hpp"
#include "dunkl/types.hpp"

namespace dunkl {

/// Per-path generator: a Mersenne Twister seeded from (seed, path index), so
/// path k draws the same numbers however the ensemble is scheduled.
class PathRng {
 public:
  PathRng(std::uint64_t seed, std::uint64_t path);
  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

struct SimConfig {
  double beta = 1.0;
  double horizon = 1.0;
  std::size_t n_paths = 10000;
  double base_dt = 0.01;
  double dt_safety = 0.05;
  /// Floor for the adaptive step. Near a wall the occupation time integral of
  /// 1/(α·x)² diverges logarithmically at β = 1, so without a floor rare paths
  /// take unbounded step counts; below it, crossings are caught by the retry.
  double min_dt = 1e-8;
  std::uint64_t seed = 0;
  InitialMixture initial;
  /// Recording times in (0, horizon]; the horizon alone when empty.
  std::vector<double> record_schedule;
  int bins = 200;
  /// Histogram half-range in units of √γ.
  double range_sqrt_gamma = 3.0;
  bool keep_samples = true;
};

struct StepResult {
  Vec x;
  double dt_used = 0.0;
  int jumps = 0;
  int halvings = 0;
};

/// One Euler–Maruyama drift/noise step followed by independent per-root
/// reflections with probability 1 − exp(−r_α dt), r_α = βκ|α|²/(4(α·x)²).
/// A step that lands on or across a wall is redrawn with dt/2, up to 10 times;
/// then ConvergenceError("stuck at wall").
StepResult step(const Vec& x, double dt, double beta, const RootSystem& r, PathRng& rng);

/// dt = min(base_dt, max(min_dt, safety · min_α (α·x)²/(βκ|α|²))).
double adaptive_dt(const RootSystem& r, const Vec& x, double beta, double base_dt, double safety,
                   double min_dt = 0.0);

/// Histogram and moments of Y = X/√(βt) at one recorded time.
struct DensityEstimate {
  double t = 0.0;
  int dim = 0;
  int bins = 0;
  double lo = 0.0, hi = 0.0;
  /// Joint bins^N histogram (row-major, first axis slowest) for N ≤ 2, else N marginals of `bins` each.
  bool joint = true;
  std::vector<std::uint64_t> counts;
  /// Samples falling outside [lo, hi) on some axis; counts total n_samples − outside (joint case).
  std::size_t outside = 0;
  std::size_t n_samples = 0;
  /// raw_moments[k−1][i] = mean of Y_i^k, k = 1..4.
  std::vector<Vec> raw_moments;
  /// Mean and sample variance of |X|² in unscaled coordinates.
  double mean_sq_norm = 0.0;
  double var_sq_norm = 0.0;
  double jump_count_mean = 0.0;
  /// Scaled samples, one per path in path order (empty unless kept).
  std::vector<Vec> samples;

  double bin_width() const { return (hi - lo) / bins; }
  double bin_center(int k) const { return lo + (k + 0.5) * bin_width(); }
  /// Histogram density of one coordinate (marginal), normalized by n_samples.
  std::vector<double> marginal_density(int axis) const;
};

struct EnsembleResult {
  std::vector<DensityEstimate> estimates;
  std::size_t stuck_paths = 0;
  double mean_steps = 0.0;
};

EnsembleResult run_ensemble(const RootSystem& r, const SimConfig& config);

/// Scaled samples Y from the exact B_1 law via a 10⁴-point inverse-CDF table.
std::vector<double> sample_exact_1d(double t, double x0, double beta, std::size_t n, std::uint64_t seed);

/// sup |F_a − F_b| between two empirical distributions.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// sup |F_n − F| against a reference CDF.
double ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf);

}  // namespace dunkl
