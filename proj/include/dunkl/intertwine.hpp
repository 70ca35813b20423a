#pragma once

#include <functional>

#include "dunkl/root_system.hpp"
#include "dunkl/types.hpp"

namespace dunkl {

/// V_β acting on linear functions: V_β(x·y) = x·M_β y with
/// M_β = I_⊥ ⊕ I_R / (1 + βγ/d_R).
struct LinearAction {
  LinearAction(const RootSystem& r, double beta);
  double parallel_factor() const { return factor_; }
  double operator()(const Vec& x, const Vec& y) const;

 private:
  RootSystem r_;
  double factor_;
};

double v_beta_linear(const RootSystem& r, double beta, const Vec& x, const Vec& y);

enum class MBetaMethod { direct_inverse, closed_form };

/// (I + β Σ_{R_+} κ αα^T/|α|²)^{-1}.
Mat m_beta_matrix(const RootSystem& r, double beta, MBetaMethod method = MBetaMethod::closed_form);

/// Where the large-β kernel approximation is trusted: βγ/d_R ≥ 10 and
/// d_R² x_∥² y_∥² / (βγ²) ≤ 0.1.
struct KernelWindow {
  double beta_ratio = 0.0;      // βγ/d_R
  double argument_ratio = 0.0;  // d_R² x_∥² y_∥² / (βγ²)
  bool beta_ok = false;
  bool argument_ok = false;
  bool inside() const { return beta_ok && argument_ok; }
};
KernelWindow large_beta_window(const RootSystem& r, double beta, const Vec& x, const Vec& y);

/// ≈ V_β e^{√β x·y}: (1 + d_R x_∥·y_∥/(γ√β)) exp(√β x_⊥·y_⊥ + x_∥² y_∥²/(2γ)).
/// Warns outside the window, never throws.
double kernel_large_beta(const RootSystem& r, double beta, const Vec& x, const Vec& y);

/// Exact B_1 kernel V_β e^z = Γ(ν+1)[ẽ_ν(|z|) + (z/2) ẽ_{ν+1}(|z|)], ν = (β−1)/2,
/// which for z > 0 is Γ(ν+1)(z/2)^{−ν}[I_ν(z) + I_{ν+1}(z)].
double kernel_exact_b1(double beta, double z);
double log_kernel_exact_b1(double beta, double z);

/// Coefficient of z^k in the Taylor expansion of kernel_exact_b1(β, ·).
double kernel_b1_taylor_coefficient(double beta, int k);

/// e^{−|x||y|} ≤ value ≤ e^{|x||y|}, with relative slack 1e-12.
bool kernel_bounds_check(const Vec& x, const Vec& y, double value);
bool kernel_bounds_check(double norm_product, double value);

/// T_i f(x) = ∂_i f + (β/2) Σ_{R_+} κ α_i (f(x) − f(σ_α x))/(α·x), with a
/// central difference of step h = 1e-5·max(1, |x|) for the derivative.
double dunkl_operator(const RootSystem& r, double beta, const std::function<double(const Vec&)>& f,
                      const Vec& x, int i);

}  // namespace dunkl
