#include "dunkl/bessel.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "dunkl/errors.hpp"

namespace dunkl {
namespace {

constexpr double kSeriesCrossover = 20.0;
constexpr double kDebyeOrder = 15.0;
constexpr int kDebyeTerms = 9;  // u_0 … u_8

void check_order(double nu) {
  if (!(nu >= -0.5)) throw ValidationError("Bessel order below -1/2 is unsupported");
}

// log Σ_m (z²/4)^m / (m! Γ(m+ν+1)). Every term is positive for ν ≥ −1/2, so the
// sum is accumulated directly, rescaled whenever it grows large.
double log_reduced_series(double nu, double z) {
  const double q = 0.25 * z * z;
  double term = 1.0, sum = 1.0, log_scale = 0.0;
  for (int m = 0; m < 100000; ++m) {
    term *= q / ((m + 1.0) * (m + nu + 1.0));
    sum += term;
    if (sum > 1e250) {
      sum *= 1e-250;
      term *= 1e-250;
      log_scale += 250.0 * std::numbers::ln10;
    }
    if (term < 1e-17 * sum && q < (m + 1.0) * (m + nu + 1.0)) break;
  }
  return std::log(sum) + log_scale - std::lgamma(nu + 1.0);
}

// u_k(p) coefficients in powers of p, from
// u_{k+1}(p) = ½p²(1−p²)u_k'(p) + ⅛∫₀^p (1−5t²)u_k(t) dt.
const std::vector<std::vector<double>>& debye_polys() {
  static const std::vector<std::vector<double>> polys = [] {
    std::vector<std::vector<double>> u{{1.0}};
    for (int k = 0; k + 1 < kDebyeTerms; ++k) {
      const auto& a = u.back();
      std::vector<double> next(a.size() + 3, 0.0);
      for (std::size_t j = 1; j < a.size(); ++j) {
        const double d = j * a[j];  // coefficient of p^{j−1} in u_k'
        next[j + 1] += 0.5 * d;
        next[j + 3] -= 0.5 * d;
      }
      for (std::size_t j = 0; j < a.size(); ++j) {
        next[j + 1] += 0.125 * a[j] / (j + 1.0);
        next[j + 3] -= 0.125 * 5.0 * a[j] / (j + 3.0);
      }
      u.push_back(std::move(next));
    }
    return u;
  }();
  return polys;
}

double log_debye(double nu, double z) {
  const double w = z / nu;
  const double root = std::sqrt(1.0 + w * w);
  const double p = 1.0 / root;
  const double eta = root + std::log(w / (1.0 + root));
  double sum = 0.0, nu_pow = 1.0;
  for (const auto& u : debye_polys()) {
    double val = 0.0;
    for (std::size_t j = u.size(); j-- > 0;) val = val * p + u[j];
    sum += val / nu_pow;
    nu_pow *= nu;
  }
  return nu * eta - 0.5 * std::log(2.0 * std::numbers::pi * nu) - 0.5 * std::log(root) + std::log(sum);
}

double log_hankel(double nu, double z) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0, prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * z);
    if (std::abs(term) > prev) break;  // asymptotic series started to diverge
    sum += term;
    prev = std::abs(term);
    if (prev < 1e-17 * std::abs(sum)) break;
  }
  return z - 0.5 * std::log(2.0 * std::numbers::pi * z) + std::log(sum);
}

}  // namespace

double log_bessel_i(double nu, double z) {
  check_order(nu);
  if (!(z >= 0.0)) throw ValidationError("Bessel argument must be nonnegative");
  if (z == 0.0) {
    if (nu == 0.0) return 0.0;
    return nu > 0.0 ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  }
  if (z < kSeriesCrossover + nu) return nu * std::log(0.5 * z) + log_reduced_series(nu, z);
  if (nu < kDebyeOrder) return log_hankel(nu, z);
  return log_debye(nu, z);
}

double bessel_i(double nu, double z) { return std::exp(log_bessel_i(nu, z)); }

double log_bessel_i_reduced(double nu, double z) {
  check_order(nu);
  if (!(z >= 0.0)) throw ValidationError("Bessel argument must be nonnegative");
  if (z < kSeriesCrossover + nu) return log_reduced_series(nu, z);
  return log_bessel_i(nu, z) - nu * std::log(0.5 * z);
}

}  // namespace dunkl
