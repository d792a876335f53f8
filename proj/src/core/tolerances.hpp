#pragma once

// Shared numeric tolerances.  Tests use the same constants.

namespace cascade::tol {

// Unitarity checks and elementwise amplitude equality.
inline constexpr double unitarity = 1e-12;

// Eigendecomposition reconstruction (w * diag(rates) * w^dag vs Theta) and
// closed-form/spectral-projector comparisons.
inline constexpr double spectral = 1e-10;

// Eigenvalues of Theta in [rate_clamp, 0) are treated as numerical zeros;
// anything below signals an unphysical coupling matrix.
inline constexpr double rate_clamp = -1e-10;

// Density-matrix invariants along trajectories.
inline constexpr double state_trace = 1e-9;
inline constexpr double state_hermiticity = 1e-10;
inline constexpr double state_positivity = -1e-8;

// Residual allowed on pruned couplings produced by the designer.
inline constexpr double design_residual = 1e-10;

}  // namespace cascade::tol
