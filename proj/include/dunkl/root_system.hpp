#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dunkl/types.hpp"

namespace dunkl {

/// σ_α x = x − 2 (α·x / α·α) α. Throws ValidationError("degenerate root") when α = 0.
Vec reflect(const Vec& alpha, const Vec& x);

/// Reflection σ_α as an N×N orthogonal matrix.
Mat reflection_matrix(const Vec& alpha);

/// How build_custom restores the convention that at least one orbit carries κ = 1.
enum class KappaNormalization {
  longest_orbit,   ///< rescale so the orbit of the longest roots has κ = 1
  shortest_orbit,  ///< rescale so the orbit of the shortest roots has κ = 1
  none,            ///< reject multiplicities with no unit orbit
};

struct CustomOptions {
  /// Vector m defining R_+ = {α : α·m > 0}. Drawn at random when absent.
  std::optional<Vec> positive_choice;
  std::uint64_t seed = 0x5eedULL;
  KappaNormalization normalization = KappaNormalization::longest_orbit;
  std::string name = "custom";
};

/// A reduced root system with a W-invariant multiplicity function κ.
///
/// Immutable after construction. The roots are stored as given (up to
/// deduplication); `positive_roots()` is the half selected by the choice
/// vector m, and `kappa()` / `positive_kappa()` run parallel to the two lists.
class RootSystem {
 public:
  int ambient_dim() const { return ambient_dim_; }
  int rank() const { return rank_; }
  double gamma() const { return gamma_; }
  const std::string& name() const { return name_; }

  const std::vector<Vec>& roots() const { return roots_; }
  const std::vector<double>& kappa() const { return kappa_; }
  const std::vector<Vec>& positive_roots() const { return positive_roots_; }
  const std::vector<double>& positive_kappa() const { return positive_kappa_; }
  const Vec& positive_choice() const { return positive_choice_; }

  /// Orthonormal columns spanning Span(R) (N × d_R).
  const Mat& span_basis() const { return span_basis_; }
  /// Orthonormal columns spanning Span(R)^⊥ (N × (N − d_R)).
  const Mat& perp_basis() const { return perp_basis_; }

  Vec project_span(const Vec& x) const;
  Vec project_perp(const Vec& x) const;

  /// κ(ξ) for a vector ξ in R; throws ValidationError if ξ is not a root.
  double kappa_of(const Vec& xi) const;
  std::optional<std::size_t> find_root(const Vec& xi) const;

  /// The same system with R_+ re-selected by a different choice vector m.
  RootSystem with_positive_choice(const Vec& m) const;

  /// Number of roots in the orbit classes (each orbit listed once, with its κ).
  struct Orbit {
    std::vector<std::size_t> members;  // indices into roots()
    double kappa = 0.0;
    double length = 0.0;
  };
  std::vector<Orbit> orbits() const;

 private:
  friend RootSystem build_custom(const std::vector<Vec>&, const std::vector<double>&,
                                 const CustomOptions&);
  RootSystem() = default;
  void select_positive(const Vec& m);

  int ambient_dim_ = 0;
  int rank_ = 0;
  double gamma_ = 0.0;
  std::string name_;
  std::vector<Vec> roots_;
  std::vector<double> kappa_;
  std::vector<Vec> positive_roots_;
  std::vector<double> positive_kappa_;
  Vec positive_choice_;
  Mat span_basis_;
  Mat perp_basis_;
};

/// Validates and assembles a root system. Errors (ValidationError) name the
/// violated property: "degenerate root", "not closed under reflection",
/// "not reduced", "multiplicity not W-invariant", "no unit multiplicity".
RootSystem build_custom(const std::vector<Vec>& roots, const std::vector<double>& kappa,
                        const CustomOptions& options = {});

/// A_{n−1} in R^n: roots e_i − e_j, κ ≡ 1.
RootSystem build_a(int n_particles);

/// B_n in R^n: roots ±e_i ± e_j (κ = 1) and ±e_i (κ = (2ν+1)/2).
/// For n = 1 the single orbit is renormalized to κ = 1.
RootSystem build_b(int n, double nu);

/// Dihedral system I_2(m) in R^2 with 2m unit roots. For even m the two
/// orbits get κ_even (roots at even multiples of π/m) and κ_odd.
RootSystem build_dihedral(int m, double kappa_even = 1.0, double kappa_odd = 1.0);

/// Embeds R in R^{ambient} by zero-padding every root.
RootSystem embed(const RootSystem& r, int ambient_dim);

/// Parses "a:N", "b:N[:nu]", "b1", "i2:M[:k1[:k2]]".
RootSystem builtin_system(const std::string& spec);

/// Σ_{α∈R_+} κ(α) αα^T/|α|².
Mat schur_sum(const RootSystem& r);

}  // namespace dunkl
