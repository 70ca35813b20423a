#pragma once

namespace dunkl {

/// log I_ν(z) for ν ≥ −1/2, z ≥ 0. Power series (summed in log space) for
/// z < 20 + ν; large-argument expansion for ν < 15 and the uniform (Debye)
/// expansion for ν ≥ 15 otherwise. Returns −∞ at z = 0 for ν > 0.
double log_bessel_i(double nu, double z);

/// I_ν(z); overflows to +∞ where log_bessel_i exceeds the double range.
double bessel_i(double nu, double z);

/// log ẽ_ν(z) with ẽ_ν(z) = (z/2)^{−ν} I_ν(z) = Σ_m (z²/4)^m / (m! Γ(m+ν+1)).
/// Finite at z = 0, where it equals −log Γ(ν+1).
double log_bessel_i_reduced(double nu, double z);

}  // namespace dunkl
