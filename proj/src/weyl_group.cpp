#include "dunkl/weyl_group.hpp"

#include <cmath>
#include <cstdint>
#include <deque>
#include <unordered_map>

#include "dunkl/errors.hpp"

namespace dunkl {
namespace {

// Entries are quantized on two grids offset by half a cell; a value within
// tolerance of a stored one shares its key on at least one grid unless two
// different coordinates sit on boundaries of both grids at once.
struct Key {
  std::vector<std::int64_t> v;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto x : k.v) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

constexpr double kMatchTol = 1e-9;
constexpr double kCell = 1e-7;

template <class Derived>
Key make_key(const Eigen::MatrixBase<Derived>& m, double offset) {
  Key k;
  k.v.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      k.v.push_back(static_cast<std::int64_t>(std::floor(m(i, j) / kCell + offset)));
  return k;
}

template <class T>
class Index {
 public:
  explicit Index(const std::vector<T>& items) : items_(items) {}

  std::optional<std::size_t> find(const T& x) const {
    for (int g = 0; g < 2; ++g) {
      auto [lo, hi] = grid_[g].equal_range(make_key(x, 0.5 * g));
      for (auto it = lo; it != hi; ++it)
        if ((items_[it->second] - x).template lpNorm<Eigen::Infinity>() < kMatchTol) return it->second;
    }
    return std::nullopt;
  }

  void insert(const T& x, std::size_t idx) {
    for (int g = 0; g < 2; ++g) grid_[g].emplace(make_key(x, 0.5 * g), idx);
  }

 private:
  const std::vector<T>& items_;
  std::unordered_multimap<Key, std::size_t, KeyHash> grid_[2];
};

}  // namespace

std::optional<std::size_t> WeylGroup::find(const Mat& g) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if ((elements_[i] - g).lpNorm<Eigen::Infinity>() < kMatchTol) return i;
  return std::nullopt;
}

std::vector<Vec> WeylGroup::orbit(const Vec& v) const {
  std::vector<Vec> out;
  Index<Vec> idx(out);
  for (const Mat& g : elements_) {
    Vec w = g * v;
    if (idx.find(w)) continue;
    out.push_back(std::move(w));
    idx.insert(out.back(), out.size() - 1);
  }
  return out;
}

WeylGroup weyl_group(const RootSystem& r, std::size_t cap) {
  const int n = r.ambient_dim();
  std::vector<Mat> gens;
  for (const Vec& a : r.positive_roots()) gens.push_back(reflection_matrix(a));

  WeylGroup w;
  w.dim_ = n;
  Index<Mat> idx(w.elements_);
  w.elements_.push_back(Mat::Identity(n, n));
  idx.insert(w.elements_.back(), 0);

  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t cur = frontier.front();
    frontier.pop_front();
    for (const Mat& s : gens) {
      Mat g = s * w.elements_[cur];
      if (idx.find(g)) continue;
      w.elements_.push_back(std::move(g));
      if (w.elements_.size() > cap)
        throw ValidationError("group too large: more than " + std::to_string(cap) + " elements");
      idx.insert(w.elements_.back(), w.elements_.size() - 1);
      frontier.push_back(w.elements_.size() - 1);
    }
  }
  return w;
}

std::vector<Vec> reflection_orbit(const RootSystem& r, const Vec& v, std::size_t cap) {
  std::vector<Vec> out{v};
  Index<Vec> idx(out);
  idx.insert(v, 0);
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t cur = frontier.front();
    frontier.pop_front();
    for (const Vec& a : r.positive_roots()) {
      Vec w = reflect(a, out[cur]);
      if (idx.find(w)) continue;
      out.push_back(std::move(w));
      if (out.size() > cap) throw ValidationError("group too large: orbit exceeds cap");
      idx.insert(out.back(), out.size() - 1);
      frontier.push_back(out.size() - 1);
    }
  }
  return out;
}

}  // namespace dunkl
