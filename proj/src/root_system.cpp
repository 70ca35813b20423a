#include "dunkl/root_system.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>

#include "dunkl/errors.hpp"

namespace dunkl {
namespace {

constexpr double kDedupTol = 1e-10;
constexpr double kClosureTol = 1e-12;
constexpr double kKappaTol = 1e-12;
constexpr double kWallTol = 1e-8;
constexpr double kRankTol = 1e-10;

std::string describe(const Vec& v) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

std::optional<std::size_t> find_in(const std::vector<Vec>& set, const Vec& v, double tol) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    if ((set[i] - v).lpNorm<Eigen::Infinity>() <= tol) return i;
  }
  return std::nullopt;
}

}  // namespace

Vec reflect(const Vec& alpha, const Vec& x) {
  const double aa = alpha.squaredNorm();
  if (!(aa > 0.0)) throw ValidationError("degenerate root");
  if (alpha.size() != x.size()) throw ValidationError("reflect: dimension mismatch");
  return x - (2.0 * alpha.dot(x) / aa) * alpha;
}

Mat reflection_matrix(const Vec& alpha) {
  const double aa = alpha.squaredNorm();
  if (!(aa > 0.0)) throw ValidationError("degenerate root");
  return Mat::Identity(alpha.size(), alpha.size()) - (2.0 / aa) * alpha * alpha.transpose();
}

Vec RootSystem::project_span(const Vec& x) const { return span_basis_ * (span_basis_.transpose() * x); }

Vec RootSystem::project_perp(const Vec& x) const {
  if (perp_basis_.cols() == 0) return Vec::Zero(x.size());
  return perp_basis_ * (perp_basis_.transpose() * x);
}

std::optional<std::size_t> RootSystem::find_root(const Vec& xi) const {
  const double scale = std::max(1.0, xi.lpNorm<Eigen::Infinity>());
  return find_in(roots_, xi, 1e-9 * scale);
}

double RootSystem::kappa_of(const Vec& xi) const {
  auto idx = find_root(xi);
  if (!idx) throw ValidationError("kappa_of: " + describe(xi) + " is not a root");
  return kappa_[*idx];
}

void RootSystem::select_positive(const Vec& m) {
  positive_roots_.clear();
  positive_kappa_.clear();
  const double mn = m.norm();
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    const double p = roots_[i].dot(m);
    if (std::abs(p) < kWallTol * mn * roots_[i].norm())
      throw ValidationError("positive choice vector lies on the wall of root " + describe(roots_[i]));
    if (p > 0) {
      positive_roots_.push_back(roots_[i]);
      positive_kappa_.push_back(kappa_[i]);
    }
  }
  positive_choice_ = m;
  gamma_ = 0.0;
  for (double k : positive_kappa_) gamma_ += k;
}

RootSystem RootSystem::with_positive_choice(const Vec& m) const {
  if (m.size() != ambient_dim_) throw ValidationError("positive choice vector has wrong dimension");
  RootSystem copy = *this;
  copy.select_positive(m);
  return copy;
}

std::vector<RootSystem::Orbit> RootSystem::orbits() const {
  std::vector<int> label(roots_.size(), -1);
  std::vector<Orbit> out;
  for (std::size_t start = 0; start < roots_.size(); ++start) {
    if (label[start] >= 0) continue;
    const int id = static_cast<int>(out.size());
    Orbit orbit;
    std::deque<std::size_t> queue{start};
    label[start] = id;
    while (!queue.empty()) {
      const std::size_t cur = queue.front();
      queue.pop_front();
      orbit.members.push_back(cur);
      for (const Vec& a : roots_) {
        auto j = find_root(reflect(a, roots_[cur]));
        if (j && label[*j] < 0) {
          label[*j] = id;
          queue.push_back(*j);
        }
      }
    }
    std::sort(orbit.members.begin(), orbit.members.end());
    orbit.kappa = kappa_[start];
    orbit.length = roots_[start].norm();
    out.push_back(std::move(orbit));
  }
  return out;
}

RootSystem build_custom(const std::vector<Vec>& roots_in, const std::vector<double>& kappa_in,
                        const CustomOptions& options) {
  if (roots_in.empty()) throw ValidationError("root list is empty");
  if (kappa_in.size() != roots_in.size())
    throw ValidationError("kappa must have one entry per root");
  const auto n = roots_in.front().size();
  if (n < 1) throw ValidationError("roots must have positive dimension");

  RootSystem r;
  r.ambient_dim_ = static_cast<int>(n);
  r.name_ = options.name;

  for (std::size_t i = 0; i < roots_in.size(); ++i) {
    const Vec& a = roots_in[i];
    if (a.size() != n) throw ValidationError("roots have inconsistent dimensions");
    if (!a.allFinite() || a.norm() < 1e-14) throw ValidationError("degenerate root");
    if (!std::isfinite(kappa_in[i])) throw ValidationError("multiplicity is not finite");
    if (kappa_in[i] < 0) throw ValidationError("negative multiplicity for root " + describe(a));
    if (auto j = find_in(r.roots_, a, kDedupTol)) {
      if (std::abs(r.kappa_[*j] - kappa_in[i]) > kKappaTol)
        throw ValidationError("duplicate root " + describe(a) + " with different multiplicities");
      continue;
    }
    r.roots_.push_back(a);
    r.kappa_.push_back(kappa_in[i]);
  }

  double scale = 0.0;
  for (const Vec& a : r.roots_) scale = std::max(scale, a.lpNorm<Eigen::Infinity>());
  const double tol = kClosureTol * std::max(1.0, scale);

  for (const Vec& a : r.roots_) {
    for (std::size_t j = 0; j < r.roots_.size(); ++j) {
      const Vec& xi = r.roots_[j];
      // Reduced: parallel roots must be ±each other.
      const double cross = a.squaredNorm() * xi.squaredNorm() - std::pow(a.dot(xi), 2);
      if (std::abs(cross) <= 1e-10 * a.squaredNorm() * xi.squaredNorm() &&
          std::abs(a.norm() - xi.norm()) > kDedupTol * std::max(1.0, a.norm()))
        throw ValidationError("not reduced: " + describe(a) + " and " + describe(xi) + " are parallel");
      const Vec image = reflect(a, xi);
      auto k = find_in(r.roots_, image, tol);
      if (!k)
        throw ValidationError("not closed under reflection: sigma_" + describe(a) + " maps " +
                              describe(xi) + " outside R");
      if (std::abs(r.kappa_[*k] - r.kappa_[j]) > kKappaTol)
        throw ValidationError("multiplicity not W-invariant at root " + describe(xi));
    }
  }

  const bool has_unit = std::any_of(r.kappa_.begin(), r.kappa_.end(),
                                    [](double k) { return std::abs(k - 1.0) <= kKappaTol; });
  if (!has_unit) {
    if (options.normalization == KappaNormalization::none)
      throw ValidationError("no unit multiplicity: at least one orbit must have kappa = 1");
    // Pick the reference orbit by root length; ties go to the larger orbit.
    std::vector<double> len(r.roots_.size());
    for (std::size_t i = 0; i < len.size(); ++i) len[i] = r.roots_[i].norm();
    const bool longest = options.normalization == KappaNormalization::longest_orbit;
    double target = longest ? *std::max_element(len.begin(), len.end())
                            : *std::min_element(len.begin(), len.end());
    double ref = 0.0;
    for (std::size_t i = 0; i < len.size(); ++i) {
      if (std::abs(len[i] - target) <= 1e-10 * target && r.kappa_[i] > ref) ref = r.kappa_[i];
    }
    if (!(ref > 0.0)) throw ValidationError("no unit multiplicity: reference orbit has kappa = 0");
    for (double& k : r.kappa_) k /= ref;
  }
  if (std::any_of(r.kappa_.begin(), r.kappa_.end(), [](double k) { return k == 0.0; }))
    warn("root system '" + r.name_ + "' has roots with zero multiplicity; their walls carry no log term");

  Mat cols(n, static_cast<Eigen::Index>(r.roots_.size()));
  for (std::size_t i = 0; i < r.roots_.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = r.roots_[i];
  Eigen::JacobiSVD<Mat> svd(cols, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > kRankTol * sv[0]) ++rank;
  r.rank_ = rank;
  r.span_basis_ = svd.matrixU().leftCols(rank);
  r.perp_basis_ = svd.matrixU().rightCols(n - rank);

  if (options.positive_choice) {
    if (options.positive_choice->size() != n)
      throw ValidationError("positive choice vector has wrong dimension");
    r.select_positive(*options.positive_choice);
  } else {
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss;
    bool ok = false;
    for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
      Vec m(n);
      for (Eigen::Index i = 0; i < n; ++i) m[i] = gauss(rng);
      const double mn = m.norm();
      ok = std::all_of(r.roots_.begin(), r.roots_.end(), [&](const Vec& a) {
        return std::abs(a.dot(m)) >= kWallTol * mn * a.norm();
      });
      if (ok) r.select_positive(m);
    }
    if (!ok) throw ValidationError("could not find an admissible positive choice vector");
  }
  return r;
}

RootSystem build_a(int n_particles) {
  if (n_particles < 2) throw ValidationError("build_a: need at least 2 particles");
  const int n = n_particles;
  std::vector<Vec> roots;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      Vec a = Vec::Zero(n);
      a[i] = 1.0;
      a[j] = -1.0;
      roots.push_back(a);
    }
  CustomOptions opt;
  opt.name = "A_" + std::to_string(n - 1);
  Vec m(n);
  for (int i = 0; i < n; ++i) m[i] = static_cast<double>(n - i);
  opt.positive_choice = m;
  opt.normalization = KappaNormalization::none;
  return build_custom(roots, std::vector<double>(roots.size(), 1.0), opt);
}

RootSystem build_b(int n, double nu) {
  if (n < 1) throw ValidationError("build_b: n must be at least 1");
  if (!(nu > -1.0)) throw ValidationError("build_b: Bessel index out of range (nu <= -1)");
  if (nu < -0.5)
    throw ValidationError("build_b: nu < -1/2 gives a negative short-root multiplicity");
  double k_short = (2.0 * nu + 1.0) / 2.0;
  if (n == 1) {
    if (nu != 0.5) warn("build_b(1, nu): the single orbit is renormalized to kappa = 1");
    k_short = 1.0;
  }
  std::vector<Vec> roots;
  std::vector<double> kappa;
  for (int i = 0; i < n; ++i) {
    for (double s : {1.0, -1.0}) {
      Vec a = Vec::Zero(n);
      a[i] = s;
      roots.push_back(a);
      kappa.push_back(k_short);
    }
    for (int j = i + 1; j < n; ++j)
      for (double si : {1.0, -1.0})
        for (double sj : {1.0, -1.0}) {
          Vec a = Vec::Zero(n);
          a[i] = si;
          a[j] = sj;
          roots.push_back(a);
          kappa.push_back(1.0);
        }
  }
  CustomOptions opt;
  opt.name = "B_" + std::to_string(n);
  Vec m(n);
  for (int i = 0; i < n; ++i) m[i] = static_cast<double>(n - i);
  opt.positive_choice = m;
  opt.normalization = KappaNormalization::longest_orbit;
  return build_custom(roots, kappa, opt);
}

RootSystem build_dihedral(int m, double kappa_even, double kappa_odd) {
  if (m < 1) throw ValidationError("build_dihedral: m must be at least 1");
  std::vector<Vec> roots;
  std::vector<double> kappa;
  for (int k = 0; k < 2 * m; ++k) {
    const double th = M_PI * k / m;
    Vec a(2);
    a << std::cos(th), std::sin(th);
    roots.push_back(a);
    kappa.push_back((m % 2 == 0 && k % 2 == 1) ? kappa_odd : kappa_even);
  }
  CustomOptions opt;
  opt.name = "I2(" + std::to_string(m) + ")";
  // Off every wall: walls of m sit at root angles ± π/2.
  const double phi = M_PI / 2.0 + M_PI / (4.0 * m);
  Vec choice(2);
  choice << std::cos(phi), std::sin(phi);
  opt.positive_choice = choice;
  return build_custom(roots, kappa, opt);
}

RootSystem embed(const RootSystem& r, int ambient_dim) {
  if (ambient_dim < r.ambient_dim()) throw ValidationError("embed: target dimension too small");
  std::vector<Vec> roots;
  for (const Vec& a : r.roots()) {
    Vec b = Vec::Zero(ambient_dim);
    b.head(a.size()) = a;
    roots.push_back(b);
  }
  CustomOptions opt;
  opt.name = r.name() + " in R^" + std::to_string(ambient_dim);
  Vec m = Vec::Zero(ambient_dim);
  m.head(r.ambient_dim()) = r.positive_choice();
  opt.positive_choice = m;
  opt.normalization = KappaNormalization::none;
  return build_custom(roots, r.kappa(), opt);
}

RootSystem builtin_system(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
  if (parts.empty()) throw ValidationError("empty root system specification");
  std::string kind = parts[0];
  std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char c) { return std::tolower(c); });
  auto num = [&](std::size_t i, double fallback) {
    if (i >= parts.size()) return fallback;
    try {
      return std::stod(parts[i]);
    } catch (const std::exception&) {
      throw ValidationError("bad number '" + parts[i] + "' in system spec '" + spec + "'");
    }
  };
  auto integer = [&](std::size_t i) {
    if (i >= parts.size()) throw ValidationError("system spec '" + spec + "' needs a size");
    return static_cast<int>(num(i, 0));
  };
  if (kind == "b1") return build_b(1, 0.5);
  if (kind == "a") return build_a(integer(1));
  if (kind == "b") return build_b(integer(1), num(2, 0.5));
  if (kind == "i2") return build_dihedral(integer(1), num(2, 1.0), num(3, num(2, 1.0)));
  throw ValidationError("unknown root system '" + spec + "' (expected a:N, b:N[:nu], b1, i2:M)");
}

Mat schur_sum(const RootSystem& r) {
  const int n = r.ambient_dim();
  Mat s = Mat::Zero(n, n);
  const auto& pos = r.positive_roots();
  const auto& k = r.positive_kappa();
  for (std::size_t i = 0; i < pos.size(); ++i) s += k[i] * pos[i] * pos[i].transpose() / pos[i].squaredNorm();
  return s;
}

}  // namespace dunkl
