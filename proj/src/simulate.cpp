#include "dunkl/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dunkl/errors.hpp"
#include "dunkl/exact1d.hpp"
#include "dunkl/quadrature.hpp"

namespace dunkl {
namespace {

constexpr int kMaxHalvings = 10;
constexpr std::uint64_t kMaxStepsPerPath = 200'000'000ULL;

// Dense copy of the active positive roots (κ > 0) so a step allocates nothing.
struct Stepper {
  Mat a;        // m × N, one root per row
  Vec kappa;    // m
  Vec norm2;    // |α|²
  Vec p, p_trial, drift, trial;

  explicit Stepper(const RootSystem& r) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < r.positive_roots().size(); ++i)
      if (r.positive_kappa()[i] > 0.0) active.push_back(i);
    const auto m = static_cast<Eigen::Index>(active.size());
    a.resize(m, r.ambient_dim());
    kappa.resize(m);
    norm2.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const Vec& root = r.positive_roots()[active[static_cast<std::size_t>(k)]];
      a.row(k) = root.transpose();
      kappa[k] = r.positive_kappa()[active[static_cast<std::size_t>(k)]];
      norm2[k] = root.squaredNorm();
    }
    p.resize(m);
    p_trial.resize(m);
    drift.resize(r.ambient_dim());
    trial.resize(r.ambient_dim());
  }

  double dt_for(const Vec& x, double beta, double base_dt, double safety, double min_dt) {
    p.noalias() = a * x;
    double dt = base_dt;
    for (Eigen::Index k = 0; k < p.size(); ++k)
      dt = std::min(dt, safety * p[k] * p[k] / (beta * kappa[k] * norm2[k]));
    return std::min(base_dt, std::max(dt, min_dt));
  }

  // Advances x in place; returns the number of jumps, throws when stuck.
  int advance(Vec& x, double& dt, double beta, PathRng& rng, int* halvings = nullptr) {
    p.noalias() = a * x;
    drift.setZero();
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      if (p[k] == 0.0) throw ConvergenceError("stuck at wall: path started on a wall");
      drift.noalias() += (0.5 * beta * kappa[k] / p[k]) * a.row(k).transpose();
    }
    bool ok = false;
    for (int h = 0; h <= kMaxHalvings && !ok; ++h) {
      if (h > 0) dt *= 0.5;
      const double sd = std::sqrt(dt);
      for (Eigen::Index i = 0; i < x.size(); ++i) trial[i] = x[i] + drift[i] * dt + sd * rng.normal();
      p_trial.noalias() = a * trial;
      ok = true;
      for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (p_trial[k] == 0.0 || (p_trial[k] > 0.0) != (p[k] > 0.0)) {
          ok = false;
          break;
        }
      }
      if (halvings) *halvings = h;
    }
    if (!ok) throw ConvergenceError("stuck at wall");
    x = trial;
    int jumps = 0;
    for (Eigen::Index k = 0; k < a.rows(); ++k) {
      const double proj = a.row(k).dot(x);
      const double rate = 0.25 * beta * kappa[k] * norm2[k] / (proj * proj);
      if (rng.uniform() < -std::expm1(-rate * dt)) {
        x.noalias() -= (2.0 * proj / norm2[k]) * a.row(k).transpose();
        ++jumps;
      }
    }
    return jumps;
  }
};

struct Accumulator {
  DensityEstimate est;
  std::vector<Vec> sums;  // Σ Y^k
  double mean = 0.0, m2 = 0.0;
  double jumps = 0.0;

  void add(const Vec& x, double scale, double n_jumps, bool keep) {
    const Vec y = x / scale;
    const int n = est.dim;
    ++est.n_samples;
    Vec pw = y;
    for (int k = 0; k < 4; ++k) {
      sums[static_cast<std::size_t>(k)] += pw;
      pw = pw.cwiseProduct(y);
    }
    const double q = x.squaredNorm();
    const double delta = q - mean;
    mean += delta / static_cast<double>(est.n_samples);
    m2 += delta * (q - mean);
    jumps += n_jumps;
    auto bin = [&](double v) {
      const double f = (v - est.lo) / est.bin_width();
      return (f >= 0.0 && f < est.bins) ? static_cast<int>(f) : -1;
    };
    if (est.joint) {
      std::size_t idx = 0;
      bool in = true;
      for (int i = 0; i < n; ++i) {
        const int b = bin(y[i]);
        if (b < 0) {
          in = false;
          break;
        }
        idx = idx * static_cast<std::size_t>(est.bins) + static_cast<std::size_t>(b);
      }
      if (in) ++est.counts[idx];
      else ++est.outside;
    } else {
      bool in = true;
      for (int i = 0; i < n; ++i) {
        const int b = bin(y[i]);
        if (b < 0) in = false;
        else ++est.counts[static_cast<std::size_t>(i * est.bins + b)];
      }
      if (!in) ++est.outside;
    }
    if (keep) est.samples.push_back(y);
  }

  DensityEstimate finish() {
    const double n = static_cast<double>(std::max<std::size_t>(est.n_samples, 1));
    est.raw_moments.clear();
    for (const Vec& s : sums) est.raw_moments.push_back(s / n);
    est.mean_sq_norm = mean;
    est.var_sq_norm = est.n_samples > 1 ? m2 / (n - 1.0) : 0.0;
    est.jump_count_mean = jumps / n;
    return est;
  }
};

}  // namespace

PathRng::PathRng(std::uint64_t seed, std::uint64_t path) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
  engine_.seed(seq);
}

double adaptive_dt(const RootSystem& r, const Vec& x, double beta, double base_dt, double safety,
                   double min_dt) {
  Stepper s(r);
  return s.dt_for(x, beta, base_dt, safety, min_dt);
}

StepResult step(const Vec& x, double dt, double beta, const RootSystem& r, PathRng& rng) {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  Stepper s(r);
  StepResult out;
  out.x = x;
  out.dt_used = dt;
  out.jumps = s.advance(out.x, out.dt_used, beta, rng, &out.halvings);
  return out;
}

std::vector<double> DensityEstimate::marginal_density(int axis) const {
  if (axis < 0 || axis >= dim) throw ValidationError("marginal_density: axis out of range");
  std::vector<double> out(static_cast<std::size_t>(bins), 0.0);
  const double norm = 1.0 / (static_cast<double>(n_samples) * bin_width());
  if (!joint) {
    for (int b = 0; b < bins; ++b) out[static_cast<std::size_t>(b)] = counts[static_cast<std::size_t>(axis * bins + b)] * norm;
    return out;
  }
  const std::size_t total = counts.size();
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    int b = 0;
    for (int i = dim - 1; i >= 0; --i) {
      const int bi = static_cast<int>(rest % static_cast<std::size_t>(bins));
      rest /= static_cast<std::size_t>(bins);
      if (i == axis) b = bi;
    }
    out[static_cast<std::size_t>(b)] += counts[idx] * norm;
  }
  return out;
}

EnsembleResult run_ensemble(const RootSystem& r, const SimConfig& config) {
  const int n = r.ambient_dim();
  if (!(config.beta > 0.0)) throw ValidationError("beta must be positive");
  if (!(config.horizon > 0.0)) throw ValidationError("horizon must be positive");
  if (!(config.base_dt > 0.0)) throw ValidationError("base_dt must be positive");
  if (!(config.dt_safety > 0.0 && config.dt_safety <= 1.0)) throw ValidationError("dt_safety must lie in (0, 1]");
  if (!(config.min_dt >= 0.0)) throw ValidationError("min_dt must be nonnegative");
  if (config.n_paths == 0) throw ValidationError("n_paths must be positive");
  if (config.bins < 1) throw ValidationError("bins must be positive");
  const InitialMixture& init = config.initial;
  if (init.points.empty() || init.points.size() != init.weights.size())
    throw ValidationError("initial condition needs matching points and weights");
  for (const Vec& x : init.points) require_in_span(r, x);

  std::vector<double> times = config.record_schedule;
  if (times.empty()) times.push_back(config.horizon);
  std::sort(times.begin(), times.end());
  if (times.front() <= 0.0 || times.back() > config.horizon * (1.0 + 1e-12))
    throw ValidationError("record times must lie in (0, horizon]");

  std::vector<double> cum(init.weights.size());
  std::partial_sum(init.weights.begin(), init.weights.end(), cum.begin());

  std::vector<Accumulator> acc(times.size());
  const double half = config.range_sqrt_gamma * std::sqrt(r.gamma());
  const bool joint = n <= 2;
  for (std::size_t k = 0; k < times.size(); ++k) {
    DensityEstimate& e = acc[k].est;
    e.t = times[k];
    e.dim = n;
    e.bins = config.bins;
    e.lo = -half;
    e.hi = half;
    e.joint = joint;
    std::size_t cells = joint ? 1 : static_cast<std::size_t>(n);
    for (int i = 0; i < (joint ? n : 1); ++i) cells *= static_cast<std::size_t>(config.bins);
    e.counts.assign(cells, 0);
    acc[k].sums.assign(4, Vec::Zero(n));
  }

  Stepper stepper(r);
  EnsembleResult result;
  std::uint64_t total_steps = 0;
  std::string first_failure;
  std::vector<Vec> snapshot(times.size());
  std::vector<double> snapshot_jumps(times.size());
  for (std::size_t path = 0; path < config.n_paths; ++path) {
    PathRng rng(config.seed, path);
    const double u = rng.uniform() * cum.back();
    const auto pick = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    Vec x = init.points[std::min(pick, init.points.size() - 1)];
    double t = 0.0;
    double jumps = 0.0;
    std::uint64_t steps = 0;
    try {
      for (std::size_t k = 0; k < times.size(); ++k) {
        while (times[k] - t > 1e-12 * times[k]) {
          double dt = std::min(stepper.dt_for(x, config.beta, config.base_dt, config.dt_safety, config.min_dt), times[k] - t);
          jumps += stepper.advance(x, dt, config.beta, rng);
          t += dt;
          if (++steps > kMaxStepsPerPath) throw ConvergenceError("stuck at wall: step budget exhausted");
        }
        t = times[k];
        snapshot[k] = x;
        snapshot_jumps[k] = jumps;
      }
    } catch (const ConvergenceError& e) {
      if (first_failure.empty()) {
        std::ostringstream msg;
        msg << "path " << path << " at t = " << t << ": " << e.what();
        first_failure = msg.str();
      }
      ++result.stuck_paths;
      continue;
    }
    total_steps += steps;
    for (std::size_t k = 0; k < times.size(); ++k)
      acc[k].add(snapshot[k], std::sqrt(config.beta * times[k]), snapshot_jumps[k], config.keep_samples);
  }
  if (static_cast<double>(result.stuck_paths) > 1e-3 * static_cast<double>(config.n_paths)) {
    std::ostringstream msg;
    msg << result.stuck_paths << " of " << config.n_paths << " paths stuck at a wall (first: " << first_failure
        << "); reduce dt_safety or base_dt";
    throw ConvergenceError(msg.str());
  }
  if (result.stuck_paths > 0)
    warn(std::to_string(result.stuck_paths) + " paths dropped after sticking at a wall");
  const std::size_t good = config.n_paths - result.stuck_paths;
  result.mean_steps = good ? static_cast<double>(total_steps) / static_cast<double>(good) : 0.0;
  for (auto& a : acc) result.estimates.push_back(a.finish());
  return result;
}

std::vector<double> sample_exact_1d(double t, double x0, double beta, std::size_t n, std::uint64_t seed) {
  constexpr int kGrid = 10000;
  const Initial1D init = Initial1D::point(x0);
  const Domain1D d = scaled_domain_1d(t, init, beta);
  std::vector<double> grid(kGrid), cdf(kGrid, 0.0);
  for (int i = 0; i < kGrid; ++i) grid[static_cast<std::size_t>(i)] = d.lo + (d.hi - d.lo) * i / (kGrid - 1.0);
  auto f = [&](double y) { return scaled_density_1d(t, y, x0, beta); };
  QuadOptions o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-10;
  for (int i = 1; i < kGrid; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double cell = integrate(f, grid[k - 1], grid[k], o).value;
    cdf[k] = cdf[k - 1] + cell;
    if (!(cell >= 0.0) || cdf[k] < cdf[k - 1]) throw ConvergenceError("CDF table is not monotone");
  }
  const double total = cdf.back();
  if (std::abs(total - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "CDF table has total mass " << total;
    throw ConvergenceError(msg.str());
  }
  for (double& c : cdf) c /= total;

  PathRng rng(seed, 0);
  std::vector<double> out(n);
  for (double& s : out) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto hi = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(it - cdf.begin(), 1, kGrid - 1));
    const double span = cdf[hi] - cdf[hi - 1];
    const double frac = span > 0.0 ? (u - cdf[hi - 1]) / span : 0.5;
    s = grid[hi - 1] + frac * (grid[hi] - grid[hi - 1]);
  }
  return out;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ValidationError("KS statistic needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

double ks_one_sample(std::vector<double> a, const std::function<double(double)>& cdf) {
  if (a.empty()) throw ValidationError("KS statistic needs a nonempty sample");
  std::sort(a.begin(), a.end());
  const double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = cdf(a[i]);
    d = std::max({d, std::abs((i + 1) / n - f), std::abs(f - i / n)});
  }
  return d;
}

}  // namespace dunkl
