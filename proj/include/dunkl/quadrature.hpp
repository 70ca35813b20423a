#pragma once

#include <functional>
#include <vector>

namespace dunkl {

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_intervals = 4000;
  /// When false, a result that misses the tolerance is returned instead of thrown.
  bool throw_on_failure = true;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Globally adaptive 21-point Gauss–Kronrod quadrature on [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

/// Same, with the interval pre-split at `breaks` (sorted, deduplicated, clipped to [a, b]).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     std::vector<double> breaks, const QuadOptions& opts = {});

}  // namespace dunkl
