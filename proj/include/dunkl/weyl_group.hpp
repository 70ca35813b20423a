#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "dunkl/root_system.hpp"
#include "dunkl/types.hpp"

namespace dunkl {

/// The finite reflection group W generated by {σ_α : α ∈ R}.
class WeylGroup {
 public:
  const std::vector<Mat>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  int dim() const { return dim_; }

  /// Index of the element within 1e-9 (max-entry distance) of g, if any.
  std::optional<std::size_t> find(const Mat& g) const;

  /// {ρ v : ρ ∈ W} deduplicated (an orbit, not a multiset).
  std::vector<Vec> orbit(const Vec& v) const;

 private:
  friend WeylGroup weyl_group(const RootSystem&, std::size_t);
  int dim_ = 0;
  std::vector<Mat> elements_;
};

inline constexpr std::size_t kDefaultGroupCap = 1'000'000;

/// Breadth-first closure of the reflections under composition.
/// Throws ValidationError("group too large") when the cap is exceeded.
WeylGroup weyl_group(const RootSystem& r, std::size_t cap = kDefaultGroupCap);

/// Orbit of a point under W, generated by repeatedly applying the reflections
/// σ_α (α ∈ R_+); never materializes the group. Points are deduplicated at 1e-9.
std::vector<Vec> reflection_orbit(const RootSystem& r, const Vec& v, std::size_t cap = kDefaultGroupCap);

}  // namespace dunkl
