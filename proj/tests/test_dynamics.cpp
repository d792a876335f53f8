#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "core/dynamics.hpp"
#include "core/regular.hpp"
#include "core/tolerances.hpp"
#include "test_util.hpp"

using namespace cascade;
using std::numbers::pi;
using cxd = std::complex<double>;

namespace {

GkslForm decompose_network(const NetworkSpec& net) {
  const CouplingMatrix zeta = coupling_matrix(net);
  return gksl_decompose(build_theta(zeta, net.gamma()), zeta);
}

// rho for a pure product state with site 1 in (|0> + |1>)/sqrt(2); nonzero
// first moments while staying in the one-excitation sector
TruncatedState plus_state_site1(int sites) {
  TruncatedState st = fock_product_state(sites, 2, std::vector<int>(sites, 0));
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(st.rho.rows());
  const Eigen::Index zero = 0;
  const Eigen::Index one = static_cast<Eigen::Index>(std::pow(2, sites - 1));
  psi(zero) = 1.0 / std::sqrt(2.0);
  psi(one) = 1.0 / std::sqrt(2.0);
  st.rho = psi * psi.adjoint();
  return st;
}

}  // namespace

TEST_CASE("lowering operator") {
  const Eigen::MatrixXcd a2 = lowering_operator(2);
  CHECK(a2(0, 1) == cxd(1.0, 0.0));
  CHECK(a2(1, 0) == cxd(0.0, 0.0));
  const Eigen::MatrixXcd a3 = lowering_operator(3);
  CHECK(a3(0, 1) == cxd(1.0, 0.0));
  CHECK(std::abs(a3(1, 2) - std::sqrt(2.0)) < 1e-15);
  const Eigen::MatrixXcd n = a3.adjoint() * a3;
  for (int j = 0; j < 3; ++j) CHECK(n(j, j) == cxd(j, 0.0));
  CHECK_THROWS_AS(lowering_operator(1), ValidationError);
}

TEST_CASE("superoperators preserve the trace") {
  std::mt19937_64 rng(31);
  const NetworkSpec net = testutil::random_network(rng, 3);
  const Superoperator gen = cascade_generator(net, 2);
  const Eigen::Index dim = 8;
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::Map<Eigen::VectorXcd> vec_id(id.data(), dim * dim);
  const Eigen::VectorXcd row = gen.matrix.adjoint() * vec_id;
  CHECK(row.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("vacuum is stationary and a single site decays exponentially") {
  NetworkSpec net(1, 1.0);
  const Superoperator gen = cascade_generator(net, 2);
  SUBCASE("vacuum fixed point") {
    const TruncatedState vac = fock_product_state(1, 2, {0});
    const Trajectory traj = evolve(gen, vac, 1.0, 0.01);
    CHECK(testutil::max_abs_diff(traj.states.back().rho, vac.rho) < 1e-12);
  }
  SUBCASE("excited population follows e^{-gamma t}") {
    const TruncatedState one = fock_product_state(1, 2, {1});
    const Trajectory traj = evolve(gen, one, 2.0, 1e-3);
    for (size_t s = 0; s < traj.times.size(); s += 200) {
      CHECK(std::abs(population(traj.states[s], 1) - std::exp(-traj.times[s])) < 1e-6);
    }
  }
}

TEST_CASE("zero generator leaves the state untouched") {
  Superoperator zero;
  zero.sites = 1;
  zero.local_dim = 2;
  zero.matrix = Eigen::SparseMatrix<cxd>(4, 4);
  const TruncatedState st = fock_product_state(1, 2, {1});
  const Trajectory traj = evolve(zero, st, 1.0, 0.1);
  CHECK(testutil::max_abs_diff(traj.states.back().rho, st.rho) == 0.0);
}

TEST_CASE("cascade and GKSL generators coincide") {
  std::mt19937_64 rng(32);
  double worst = 0.0;
  for (int trial = 0; trial < 12; ++trial) {
    const int M = 2 + trial % 3;
    const double loss = (trial % 4 == 0) ? 0.2 : 0.0;
    const NetworkSpec net = testutil::random_network(rng, M, loss);
    const Superoperator casc = cascade_generator(net, 2);
    const Superoperator gksl = gksl_generator(decompose_network(net), 2);
    worst = std::max(worst, (casc.matrix - gksl.matrix).norm());
  }
  CHECK(worst < tol::spectral);
}

TEST_CASE("uncoupled network reduces to independent local dampers") {
  const NetworkSpec net(3, 1.3);
  const Superoperator casc = cascade_generator(net, 2);
  const Superoperator gksl = gksl_generator(decompose_network(net), 2);
  CHECK((casc.matrix - gksl.matrix).norm() < tol::spectral);
}

TEST_CASE("even/odd closed form generates the same superoperator") {
  for (int M : {3, 4}) {
    for (double tau1 : {0.3, 1.0}) {
      const NetworkSpec net = expand_regular(testutil::evenodd_regular(M, tau1, -pi / 2));
      const Superoperator numeric = gksl_generator(decompose_network(net), 2);
      const Superoperator closed =
          gksl_generator(lindblad_closed_form_evenodd(M, tau1, 1.0), 2);
      CHECK((numeric.matrix - closed.matrix).norm() < tol::spectral);
    }
  }
}

TEST_CASE("trajectories stay physical") {
  std::mt19937_64 rng(33);
  const NetworkSpec net = testutil::random_network(rng, 3);
  const Superoperator gen = cascade_generator(net, 2);
  const TruncatedState init = fock_product_state(3, 2, {1, 0, 1});
  const Trajectory traj = evolve(gen, init, 3.0, 1e-3, 10);
  for (const TruncatedState& st : traj.states) {
    CHECK(std::abs(st.rho.trace().real() - 1.0) < tol::state_trace);
    CHECK((st.rho - st.rho.adjoint()).cwiseAbs().maxCoeff() < tol::state_hermiticity);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(st.rho, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() > tol::state_positivity);
  }
  CHECK(traj.convergence_error < 1e-9);
}

TEST_CASE("excitations never travel upstream") {
  std::mt19937_64 rng(34);
  const NetworkSpec net = testutil::random_network(rng, 3);
  const Superoperator gen = cascade_generator(net, 2);
  for (int excited = 2; excited <= 3; ++excited) {
    std::vector<int> occ(3, 0);
    occ[static_cast<size_t>(excited - 1)] = 1;
    const Trajectory traj = evolve(gen, fock_product_state(3, 2, occ), 2.0, 1e-2);
    for (const TruncatedState& st : traj.states) {
      for (int m = 1; m < excited; ++m) CHECK(population(st, m) < 1e-9);
    }
  }
}

TEST_CASE("first moments follow the triangular drift") {
  SUBCASE("drift matrix entries") {
    NetworkSpec net(2, 1.0);
    net.set_element(1, 2, BeamSplitter(0.75, 0.0));
    const Eigen::MatrixXcd g = first_moment_drift(coupling_matrix(net), 1.0);
    Eigen::MatrixXcd expect(2, 2);
    expect << -0.5, 0.0, cxd(0, 0.5), -0.5;
    CHECK(testutil::max_abs_diff(g, expect) < 1e-15);

    const Eigen::MatrixXcd g1 = first_moment_drift(coupling_matrix(NetworkSpec(1, 2.0)), 2.0);
    CHECK(g1(0, 0) == cxd(-1.0, 0.0));
  }
  SUBCASE("strictly lower triangular off the diagonal") {
    std::mt19937_64 rng(35);
    const Eigen::MatrixXcd g =
        first_moment_drift(coupling_matrix(testutil::random_network(rng, 5)), 1.0);
    for (int m = 0; m < 5; ++m) {
      for (int mp = m + 1; mp < 5; ++mp) CHECK(g(m, mp) == cxd(0.0, 0.0));
    }
  }
  SUBCASE("matrix-exponential oracle vs the integrator") {
    std::mt19937_64 rng(36);
    const NetworkSpec net = testutil::random_network(rng, 3);
    const Superoperator gen = cascade_generator(net, 2);
    const TruncatedState init = plus_state_site1(3);
    const double t_final = 2.0;
    const Trajectory traj = evolve(gen, init, t_final, 1e-3, 500);
    const Eigen::MatrixXcd g = first_moment_drift(coupling_matrix(net), 1.0);
    Eigen::VectorXcd m0(3);
    m0 << 0.5, 0.0, 0.0;
    for (size_t s = 0; s < traj.times.size(); ++s) {
      const Eigen::MatrixXcd propagator = (traj.times[s] * g).exp();
      const Eigen::VectorXcd expect = propagator * m0;
      for (int m = 1; m <= 3; ++m) {
        CHECK(std::abs(site_moment(traj.states[s], m) - expect(m - 1)) < 1e-6);
      }
    }
  }
}

TEST_CASE("pruned first-neighbor couplings flip sign under site reversal") {
  const DesignSchedule sched = design_pruned(1, 0.8, -pi / 2, 6);
  RegularSpec spec;
  spec.sites = 7;
  spec.taus = sched.taus;
  spec.phis = sched.phis;
  const Eigen::MatrixXcd h =
      heff_coefficients(coupling_matrix(expand_regular(spec)), 1.0);
  const int M = 7;
  for (int j = 0; j < M; ++j) {
    for (int k = 0; k < M; ++k) {
      CHECK(std::abs(h(M - 1 - j, M - 1 - k) + h(j, k)) < 1e-10);
    }
  }
}

TEST_CASE("dimension caps and input validation") {
  NetworkSpec big(13, 1.0);
  CHECK_THROWS_AS(cascade_generator(big, 2), ResourceError);
  NetworkSpec ok(2, 1.0);
  CHECK_THROWS_AS(cascade_generator(ok, 1), ValidationError);
  CHECK_THROWS_AS(fock_product_state(2, 2, {0, 2}), ValidationError);
  CHECK_THROWS_AS(fock_product_state(2, 2, {0}), ValidationError);

  const Superoperator gen = cascade_generator(ok, 2);
  const TruncatedState st = fock_product_state(2, 2, {1, 0});
  CHECK_THROWS_AS(evolve(gen, st, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(evolve(gen, st, -1.0, 0.1), ValidationError);

  TruncatedState bad = st;
  bad.rho *= 2.0;  // trace 2
  CHECK_THROWS_AS(evolve(gen, bad, 1.0, 0.1), PhysicalityError);
}

TEST_CASE("oversized steps are reported as integration failures") {
  NetworkSpec net(2, 1.0);
  net.set_element(1, 2, BeamSplitter(0.0, 0.0));
  const Superoperator gen = cascade_generator(net, 2);
  const TruncatedState init = fock_product_state(2, 2, {1, 1});
  CHECK_THROWS_AS(evolve(gen, init, 10.0, 2.5), PhysicalityError);
}
