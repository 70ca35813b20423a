#include "dunkl/asymfit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "dunkl/errors.hpp"

namespace dunkl {

namespace {

constexpr double kSignalFloor = 1e-12;

double validity_time(const RootSystem& r, double beta, double x2) {
  const double rad = tolerance_radius(r, beta, 1e-3);
  const double bgr2 = beta * r.gamma() * rad * rad;
  return x2 * std::max(1.0 / bgr2, bgr2);
}

double max_sq(const InitialMixture& init) {
  double m = 0.0;
  for (const Vec& x : init.points) m = std::max(m, x.squaredNorm());
  return m;
}

// Levenberg–Marquardt for y ≈ (c/w) N(m, s2) on a grid.
struct GaussFit {
  double c, m, s2;
};

GaussFit lm_gauss(const std::vector<double>& y, const std::vector<double>& f, double w, GaussFit p) {
  const std::size_t n = y.size();
  auto residuals = [&](const GaussFit& q, Eigen::VectorXd& res, Eigen::MatrixXd* jac) {
    res.resize(n);
    if (jac) jac->resize(n, 3);
    const double norm = 1.0 / (w * std::sqrt(2.0 * M_PI * q.s2));
    for (std::size_t k = 0; k < n; ++k) {
      const double d = y[k] - q.m;
      const double g = norm * std::exp(-0.5 * d * d / q.s2);
      res[k] = q.c * g - f[k];
      if (jac) {
        (*jac)(k, 0) = g;
        (*jac)(k, 1) = q.c * g * d / q.s2;
        (*jac)(k, 2) = q.c * g * (0.5 * d * d / (q.s2 * q.s2) - 0.5 / q.s2);
      }
    }
    return res.squaredNorm();
  };

  Eigen::VectorXd res, trial_res;
  Eigen::MatrixXd jac;
  double cost = residuals(p, res, &jac);
  double lambda = 1e-3;
  for (int it = 0; it < 500; ++it) {
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d g = jac.transpose() * res;
    bool improved = false;
    for (int inner = 0; inner < 60 && !improved; ++inner) {
      Eigen::Matrix3d a = jtj;
      for (int i = 0; i < 3; ++i) a(i, i) += lambda * std::max(jtj(i, i), 1e-300);
      const Eigen::Vector3d delta = a.ldlt().solve(-g);
      GaussFit q{p.c + delta[0], p.m + delta[1], p.s2 + delta[2]};
      if (!(q.s2 > 0.0) || !std::isfinite(q.c) || !std::isfinite(q.m)) {
        lambda *= 10.0;
        continue;
      }
      const double c2 = residuals(q, trial_res, nullptr);
      if (c2 <= cost) {
        const double rel = (cost - c2) / std::max(cost, 1e-300);
        const double step = std::abs(delta[0]) / std::max(1.0, std::abs(p.c)) +
                            std::abs(delta[1]) / std::max(1.0, std::abs(p.m)) + std::abs(delta[2]) / p.s2;
        p = q;
        cost = residuals(p, res, &jac);
        lambda = std::max(lambda / 10.0, 1e-12);
        improved = true;
        if (rel < 1e-15 || step < 1e-14) return p;
      } else {
        lambda *= 10.0;
      }
    }
    if (!improved) return p;  // no descent direction left: at the minimum to rounding
  }
  throw ConvergenceError("mixture fit did not converge");
}

void fill_discrepancies(PeakFit& pf) {
  pf.center_discrepancy = (pf.fitted_center - pf.predicted_center).norm();
  pf.sigma2_discrepancy = std::abs(pf.fitted_sigma2 / pf.predicted_sigma2 - 1.0);
  pf.coefficient_discrepancy = std::abs(pf.fitted_coefficient - pf.predicted_coefficient);
}

Vec direction_of(const InitialMixture& init) {
  for (const Vec& x : init.points)
    if (x.norm() > 0.0) return x / x.norm();
  return Vec::Zero(init.points.front().size());
}

}  // namespace

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw ValidationError("line fit needs at least two matching points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw ValidationError("line fit needs distinct abscissae");
  LineFit f{};
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    rss += e * e;
  }
  f.slope_stderr = n > 2 ? std::sqrt(rss / (n - 2) / sxx) : 0.0;
  return f;
}

DecayFit fit_decay(const std::vector<double>& times, const std::vector<double>& deviations) {
  if (times.size() < 4 || deviations.size() != times.size())
    throw ValidationError("decay fit needs at least 4 times");
  const auto [tmin, tmax] = std::minmax_element(times.begin(), times.end());
  if (!(*tmin > 0.0) || std::log10(*tmax / *tmin) < 1.5 - 1e-12)
    throw ValidationError("decay fit times must span at least 1.5 decades");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(deviations[i] > kSignalFloor)) throw ConvergenceError("signal lost");
    lx.push_back(std::log(times[i]));
    ly.push_back(std::log(deviations[i]));
  }
  const LineFit lf = fit_line(lx, ly);
  DecayFit d;
  d.times = times;
  d.deviations = deviations;
  d.slope = lf.slope;
  d.slope_stderr = lf.slope_stderr;
  d.intercept = lf.intercept;
  return d;
}

DecayFit steady_decay_fit(const std::function<double(double)>& phi, const Initial1D& init, double beta,
                          const std::vector<double>& times) {
  const double steady = steady_expectation_1d(phi, beta);
  const bool absolute = std::abs(steady) <= kSignalFloor;
  std::vector<double> dev;
  for (double t : times) {
    const double e = expectation_1d(phi, t, init, beta);
    dev.push_back(absolute ? std::abs(e) : std::abs(e / steady - 1.0));
  }
  DecayFit d = fit_decay(times, dev);
  d.absolute = absolute;
  const double x = init.max_abs();
  d.validity_time = validity_time(builtin_system("b1"), beta, x * x);
  return d;
}

DecayFit steady_decay_fit_mc(const RootSystem& r, const std::function<double(const Vec&)>& phi,
                             double steady_value, SimConfig config, const std::vector<double>& times,
                             int bootstrap) {
  if (times.empty()) throw ValidationError("no times given");
  config.record_schedule = times;
  std::sort(config.record_schedule.begin(), config.record_schedule.end());
  config.horizon = config.record_schedule.back();
  config.keep_samples = true;
  const EnsembleResult ens = run_ensemble(r, config);

  const bool absolute = std::abs(steady_value) <= kSignalFloor;
  auto deviation = [&](double mean) { return absolute ? std::abs(mean) : std::abs(mean / steady_value - 1.0); };

  std::vector<double> ts, dev, err;
  std::mt19937_64 boot_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  for (const DensityEstimate& est : ens.estimates) {
    std::vector<double> v;
    v.reserve(est.samples.size());
    for (const Vec& y : est.samples) v.push_back(phi(y));
    if (v.empty()) throw ValidationError("ensemble kept no samples");
    double mean = 0.0;
    for (double a : v) mean += a;
    mean /= v.size();
    std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
    double s1 = 0.0, s2 = 0.0;
    for (int b = 0; b < bootstrap; ++b) {
      double m = 0.0;
      for (std::size_t k = 0; k < v.size(); ++k) m += v[pick(boot_rng)];
      const double dv = deviation(m / v.size());
      s1 += dv;
      s2 += dv * dv;
    }
    ts.push_back(est.t);
    dev.push_back(deviation(mean));
    err.push_back(bootstrap > 1 ? std::sqrt(std::max(0.0, (s2 - s1 * s1 / bootstrap) / (bootstrap - 1))) : 0.0);
  }
  DecayFit d = fit_decay(ts, dev);
  d.deviation_errors = err;
  d.absolute = absolute;
  d.validity_time = validity_time(r, config.beta, max_sq(config.initial));
  return d;
}

double MixtureFit::asymmetry() const {
  if (peaks.empty() || x0_direction.size() == 0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < peaks.size(); ++i)
    s += peaks[i].fitted_coefficient * x0_direction.dot(predicted_directions[i]);
  return s / static_cast<double>(peaks.size());
}

MixtureFit freeze_fit_1d(const std::function<double(double)>& density, double beta, double t,
                         const Initial1D& init, const FreezeOptions& opts) {
  if (opts.grid_points < 5) throw ValidationError("freeze fit needs at least 5 grid points");
  const RootSystem b1 = builtin_system("b1");
  InitialMixture mix;
  for (std::size_t k = 0; k < init.points.size(); ++k) {
    mix.points.push_back(Vec::Constant(1, init.points[k]));
    mix.weights.push_back(init.weights[k]);
  }
  const PeakSet peaks = peak_set(b1);
  const GaussianMixture pred = gaussian_tilde(b1, beta, t, mix, peaks, opts.form);
  const double lambda_min = 2.0;
  const double hw = opts.window_factor / std::sqrt(beta * lambda_min);
  const double w = static_cast<double>(pred.centers.size());

  for (std::size_t i = 0; i < pred.centers.size(); ++i)
    for (std::size_t j = i + 1; j < pred.centers.size(); ++j)
      if ((pred.centers[i] - pred.centers[j]).norm() < 2.0 * hw) throw ValidationError("peaks unresolved");
  for (const Vec& c : pred.centers)
    if (std::abs(c[0]) < hw) throw ValidationError("peaks unresolved");

  MixtureFit out;
  out.beta = beta;
  out.t = t;
  out.x0_direction = direction_of(mix);
  for (std::size_t i = 0; i < pred.centers.size(); ++i) {
    const double m0 = pred.centers[i][0];
    std::vector<double> ys(opts.grid_points), fs(opts.grid_points);
    for (int k = 0; k < opts.grid_points; ++k) {
      ys[k] = m0 - hw + 2.0 * hw * k / (opts.grid_points - 1);
      fs[k] = density(ys[k]);
    }
    PeakFit pf;
    pf.predicted_center = pred.centers[i];
    pf.predicted_sigma2 = 1.0 / pred.precision_matrices[i](0, 0);
    pf.predicted_coefficient = pred.coefficients[i];
    const GaussFit g = lm_gauss(ys, fs, w, {pf.predicted_coefficient, m0, pf.predicted_sigma2});
    pf.fitted_center = Vec::Constant(1, g.m);
    pf.fitted_sigma2 = g.s2;
    pf.fitted_coefficient = g.c;
    fill_discrepancies(pf);
    out.predicted_directions.push_back(peaks.points[i] / peaks.points[i].norm());
    out.peaks.push_back(std::move(pf));
  }
  out.resolved = static_cast<int>(out.peaks.size());
  return out;
}

MixtureFit freeze_fit(const DensityEstimate& density, const RootSystem& r, double beta, double t,
                      const InitialMixture& init, const FreezeOptions& opts) {
  if (density.samples.empty()) throw ValidationError("freeze fit needs kept samples");
  const PeakSet peaks = peak_set(r);
  const GaussianMixture pred = gaussian_tilde(r, beta, t, init, peaks, opts.form);
  const std::size_t np = pred.centers.size();

  double lambda_min = 2.0;
  for (const Vec& ev : peaks.eigenvalues) lambda_min = std::min(lambda_min, ev.minCoeff());
  const double hw = opts.window_factor / std::sqrt(beta * lambda_min);
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = i + 1; j < np; ++j)
      if ((pred.centers[i] - pred.centers[j]).norm() < 2.0 * hw) throw ValidationError("peaks unresolved");

  // Nearest predicted center = chamber of the sample, since the centers form one W-orbit.
  const Mat span = r.span_basis();
  const int d = r.rank();
  std::vector<std::size_t> count(np, 0);
  std::vector<Vec> sum(np, Vec::Zero(d));
  std::vector<Mat> sum2(np, Mat::Zero(d, d));
  for (const Vec& y : density.samples) {
    std::size_t best = 0;
    double bd = INFINITY;
    for (std::size_t i = 0; i < np; ++i) {
      const double dist = (y - pred.centers[i]).squaredNorm();
      if (dist < bd) bd = dist, best = i;
    }
    const Vec z = span.transpose() * y;
    ++count[best];
    sum[best] += z;
    sum2[best] += z * z.transpose();
  }

  MixtureFit out;
  out.beta = beta;
  out.t = t;
  out.x0_direction = direction_of(init);
  const double n = static_cast<double>(density.samples.size());
  for (std::size_t i = 0; i < np; ++i) {
    PeakFit pf;
    pf.predicted_center = pred.centers[i];
    const Mat cov_pred = (span.transpose() * pred.precision_matrices[i] * span).inverse();
    pf.predicted_sigma2 = cov_pred.trace() / d;
    pf.predicted_coefficient = pred.coefficients[i];
    pf.fitted_coefficient = static_cast<double>(np) * count[i] / n;
    if (count[i] > 1) {
      const Vec mean = sum[i] / count[i];
      const Mat cov = (sum2[i] - count[i] * mean * mean.transpose()) / (count[i] - 1.0);
      pf.fitted_center = span * mean;
      pf.fitted_sigma2 = cov.trace() / d;
      fill_discrepancies(pf);
      ++out.resolved;
    } else {
      pf.fitted_center = pred.centers[i];
      pf.fitted_sigma2 = NAN;
      pf.center_discrepancy = pf.sigma2_discrepancy = NAN;
      pf.coefficient_discrepancy = std::abs(pf.fitted_coefficient - pf.predicted_coefficient);
    }
    out.predicted_directions.push_back(peaks.points[i] / peaks.points[i].norm());
    out.peaks.push_back(std::move(pf));
  }
  return out;
}

MechanismSplit mechanism_split(const std::vector<SplitCell>& cells) {
  std::set<double> betas, times;
  for (const SplitCell& c : cells) betas.insert(c.beta), times.insert(c.t);
  if (betas.size() < 3 || times.size() < 3) throw ValidationError("insufficient grid: need 3 values each of beta and t");

  MechanismSplit ms;
  for (const SplitCell& c : cells) {
    if (c.fit.peaks.size() != c.baseline.peaks.size() || c.fit.peaks.empty())
      throw ValidationError("fit and baseline have different peak counts");
    double cs = 0.0, vs = 0.0;
    for (std::size_t i = 0; i < c.fit.peaks.size(); ++i) {
      const PeakFit& a = c.fit.peaks[i];
      const PeakFit& b = c.baseline.peaks[i];
      cs += (a.fitted_center - b.fitted_center).norm();
      vs += std::abs(a.fitted_sigma2 / b.fitted_sigma2 - 1.0);
    }
    ms.bt.push_back(c.beta * c.t);
    ms.center_shift.push_back(cs / c.fit.peaks.size());
    ms.variance_shift.push_back(vs / c.fit.peaks.size());
    ms.asymmetry.push_back(std::abs(c.fit.asymmetry() - c.baseline.asymmetry()));
  }

  std::vector<double> lbt;
  for (double v : ms.bt) lbt.push_back(std::log(v));
  auto power_law = [&](const std::vector<double>& v) {
    std::vector<double> ly;
    for (double a : v) {
      if (!(a > kSignalFloor)) throw ConvergenceError("signal lost");
      ly.push_back(std::log(a));
    }
    return fit_line(lbt, ly);
  };
  ms.center_exponent = power_law(ms.center_shift);
  ms.variance_exponent = power_law(ms.variance_shift);
  // A W-symmetric start has no exchange-driven asymmetry; its residue is fit noise.
  if (*std::max_element(ms.asymmetry.begin(), ms.asymmetry.end()) <= 1e-8) {
    ms.asymmetry_fitted = false;
  } else {
    ms.asymmetry_exponent = power_law(ms.asymmetry);
  }
  return ms;
}

std::vector<SplitCell> exact_split_grid_1d(const std::vector<double>& betas, const std::vector<double>& times,
                                           const Initial1D& init, const FreezeOptions& opts) {
  std::vector<SplitCell> cells;
  for (double beta : betas) {
    // Starting at the origin the scaled law is already the steady state.
    const MixtureFit base = freeze_fit_1d([beta](double y) { return steady_density_1d(beta, y); }, beta,
                                          times.front(), Initial1D::point(0.0), opts);
    for (double t : times) {
      SplitCell c;
      c.beta = beta;
      c.t = t;
      c.fit = freeze_fit_1d([&](double y) { return scaled_density_1d(t, y, init, beta); }, beta, t, init, opts);
      c.baseline = base;
      c.baseline.x0_direction = c.fit.x0_direction;
      cells.push_back(std::move(c));
    }
  }
  return cells;
}

double tail_integral(TailFamily family, double c, double p1, double p2) {
  if (!(c > 0.0)) throw ValidationError("tail cutoff C must be positive");
  switch (family) {
    case TailFamily::cutoff:
      return 0.0;
    case TailFamily::stretched_exp: {
      const double l = p1, xi = p2;
      if (!(l > 0.0 && xi > 0.0)) throw ValidationError("stretched exponential needs l > 0 and xi > 0");
      return (l / xi) * std::pow(l / c, xi - 1.0) * std::exp(-std::pow(c / l, xi));
    }
    case TailFamily::power: {
      const double zeta = p1;
      if (!(zeta > 0.0)) throw ValidationError("power tail needs zeta > 0");
      return std::pow(c, -zeta) / zeta;
    }
  }
  throw ValidationError("unknown tail family");
}

double tail_integral_exact_stretched(double c, double l, double xi) {
  if (!(c > 0.0 && l > 0.0 && xi > 0.0)) throw ValidationError("invalid stretched exponential parameters");
  return (l / xi) * boost::math::tgamma(1.0 / xi, std::pow(c / l, xi));
}

}  // namespace dunkl
