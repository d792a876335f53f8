#pragma once

// Master-equation dynamics on truncated per-site Fock spaces: the cascade
// generator, its GKSL form, and a fixed-step RK4 integrator on vectorized
// density matrices.
//
// Vectorization is column-stacking throughout: vec(A rho B) =
// (B^T kron A) vec(rho), with site 1 the slowest (leftmost) tensor factor.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <vector>

#include "core/gksl.hpp"
#include "core/network.hpp"

namespace cascade {

struct TruncatedState {
  int sites = 0;
  int local_dim = 2;
  Eigen::MatrixXcd rho;
};

// Throws PhysicalityError when trace, Hermiticity, or positivity leave their
// tolerances (tol::state_*).
void validate_state(const TruncatedState& state, const std::string& context = "");

struct Superoperator {
  int sites = 0;
  int local_dim = 2;
  Eigen::SparseMatrix<std::complex<double>> matrix;  // d^2M x d^2M
};

// Bosonic ladder truncated to d levels: sqrt(j) on the (j-1, j) superdiagonal.
Eigen::MatrixXcd lowering_operator(int local_dim);

// Product state with the listed occupation numbers (0-based levels).
TruncatedState fock_product_state(int sites, int local_dim,
                                  const std::vector<int>& occupations);

double population(const TruncatedState& state, int site);
std::complex<double> site_moment(const TruncatedState& state, int site);

// Generator of the cascade master equation: local dampers plus the
// directional cross terms weighted by zeta.  The default cap refuses
// d^(2M) > 2^24 vectorized entries; override at your own memory's risk.
Superoperator cascade_generator(const NetworkSpec& net, int local_dim,
                                bool override_cap = false);

// Generator assembled from a GKSL form: -i[H_eff, .] plus the jump channels.
Superoperator gksl_generator(const GkslForm& form, int local_dim,
                             bool override_cap = false);

struct Trajectory {
  std::vector<double> times;
  std::vector<TruncatedState> states;
  // max-norm distance at t_final between the dt and dt/2 solutions
  double convergence_error = 0.0;
};

// Fixed-step classical RK4 on the vectorized state, emitting every `stride`
// steps (the final time is always emitted; a shortened last step lands on
// t_final exactly).  Every emitted state is validated; a violation suggests
// dt is too large.  Step-halving supplies the convergence estimate.
Trajectory evolve(const Superoperator& gen, const TruncatedState& rho0, double t_final,
                  double dt, int stride = 1, bool estimate_convergence = true);

// Lower-triangular drift G of the first moments, d<a>/dt = G <a>:
// G_mm = -gamma/2, G_{m'm} = -gamma zeta_{m,m'}.  Exact for states confined
// to the <=1-excitation sector, where the truncated ladder algebra matches
// the bosonic one; used as an independent oracle for evolve.
Eigen::MatrixXcd first_moment_drift(const CouplingMatrix& zeta, double gamma);

}  // namespace cascade
