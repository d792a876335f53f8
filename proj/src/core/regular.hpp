#pragma once

// Translation-invariant networks: xi_k couplings, the transfer-matrix closed
// form, the K=2 analytic profile, and the interaction-pruning designer.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "core/network.hpp"

namespace cascade {

// KxK unitary propagating the K active channel amplitudes (tau_K = 0) one
// network level forward.  Zero above the first superdiagonal.
struct TransferMatrix {
  int active_channels = 0;
  Eigen::MatrixXcd matrix;
};

// xi_k = zeta_{1,k+1}, k = 1..kmax; carries (1-nu)^k when loss is present.
struct XiProfile {
  std::vector<std::complex<double>> xi;
  double loss = 0.0;
};

// Transmissivity/phase schedule that retains only the order-n coupling.
struct DesignSchedule {
  int order = 1;
  std::vector<double> taus;
  std::vector<double> phis;
  double retained_modulus = 0.0;     // |xi_n| = sqrt(1 - tau_base)
  double max_pruned_residual = 0.0;  // self-check: max |xi_k| over pruned k
};

// Builds T from tau_1..tau_{K-1} (tau_K = 0 implicit) and phi_1..phi_K.
TransferMatrix transfer_matrix(const std::vector<double>& taus,
                               const std::vector<double>& phis);

// xi_k = (T^k)_{11} via the eigendecomposition of T; falls back to direct
// matrix powering when the diagonalization residual is poor (T is unitary,
// so powering is stable).
XiProfile xi_profile_closed(const TransferMatrix& t, int kmax);

// General engine: expands the regular spec and reads off row one of the
// coupling matrix.  Requires kmax <= M-1.
XiProfile xi_profile(const RegularSpec& spec, int kmax);

// K=2 closed formula xi_k = (u+ e^{ik th+} - u- e^{ik th-})/(u+ - u-), with
// both square-root branches taken coherently.  Degenerate u+ = u- falls back
// to the transfer-matrix route and sets *used_fallback.
XiProfile xi_k2_analytic(double tau1, double phi1, double phi2, int kmax,
                         bool* used_fallback = nullptr);

// Raw pruning recursion values tau_2..tau_count for first-neighbor retention;
// may leave [0,1] (callers decide whether that is an error).  Entry k-1 holds
// tau_k; tau_1 = tau_base.
std::vector<double> pruning_recursion(double tau_base, int count);

// Schedule retaining only the order-n coupling: tau_k = 1 off multiples of n,
// the recursion values at k = j*n, phases solved so every pruned xi_k
// interferes to zero.  Validates its own output through xi_profile.
DesignSchedule design_pruned(int order, double tau_base, double phi_base, int count);

// Smallest grid multiple of tau_1 for which the recursion stays inside [0,1]
// up to order k.  Optional bisection refinement to width 1e-8.
double threshold_scan(int k, double grid, bool refine = false);

}  // namespace cascade
