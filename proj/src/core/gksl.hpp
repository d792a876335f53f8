#pragma once

// Standard-form decomposition of the cascade master equation: rates and
// collective Lindblad operators from the Theta matrix, plus the effective
// chiral Hamiltonian coefficients.

#include <Eigen/Dense>

#include "core/amplitudes.hpp"

namespace cascade {

// Hermitian MxM matrix with gamma on the diagonal and gamma*zeta_{m,m'}
// above it.  Its eigenvalues are the GKSL rates.
struct ThetaMatrix {
  Eigen::MatrixXcd matrix;
  double gamma = 0.0;
};

struct GkslForm {
  // Rates, sorted descending; eigenvalues of Theta with values in
  // [tol::rate_clamp, 0) clamped to zero.
  Eigen::VectorXd rates;
  // Unitary whose columns are the matching eigenvectors of Theta:
  //   Theta = lindblad * diag(rates) * lindblad^dag.
  // Column i holds the site coefficients of the i-th jump operator,
  //   L_i = sum_m lindblad(m,i) a_m.
  // (Defining L_i through the conjugated coefficients, as one might read the
  // eigenvector relation, fails to reproduce the cascade dissipator for
  // complex couplings; see gksl_generator tests.)
  Eigen::MatrixXcd lindblad;
  // Hermitian coefficient matrix h of the effective Hamiltonian,
  //   H_eff = sum_{m != m'} h(m,m') a_m a_m'^dag,
  // with h(m,m') = -(i*gamma/2) zeta_{m,m'} above the diagonal.
  Eigen::MatrixXcd heff;
  double gamma = 0.0;
};

ThetaMatrix build_theta(const CouplingMatrix& zeta, double gamma);

Eigen::MatrixXcd heff_coefficients(const CouplingMatrix& zeta, double gamma);

// Eigendecomposition of Theta.  Throws PhysicalityError if an eigenvalue
// falls below tol::rate_clamp (coupling matrix inconsistent with a physical
// network).  Eigenvector phases are fixed by rotating the first entry of
// modulus > 1e-12 to the positive real axis; within degenerate subspaces the
// basis remains solver-dependent, so closed-form comparisons should use
// spectral projectors.
GkslForm gksl_decompose(const ThetaMatrix& theta, const CouplingMatrix& zeta);

// Analytic two-operator form for the even/odd network (regular, tau_2 = 0,
// phi_2 = phi_1 + pi/2), in the gauge where the xi profile is real:
// xi_k = sqrt(1-tau_1) for odd k, 1 for even k.  Rates are
//   M even:  M*gamma*(1 +- sqrt(1-tau_1))/2
//   M odd:   M*gamma*(1 +- sqrt(1-(1-1/M^2)*tau_1))/2
// with the remaining M-2 rates zero; the lindblad matrix is completed to a
// full unitary with a kernel basis.
GkslForm lindblad_closed_form_evenodd(int sites, double tau1, double gamma);

}  // namespace cascade
