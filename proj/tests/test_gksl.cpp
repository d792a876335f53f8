#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "core/gksl.hpp"
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

Eigen::MatrixXcd spectral_projector(const GkslForm& form, double rate, double tol_group) {
  const int M = static_cast<int>(form.rates.size());
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(M, M);
  for (int i = 0; i < M; ++i) {
    if (std::abs(form.rates(i) - rate) < tol_group) {
      p += form.lindblad.col(i) * form.lindblad.col(i).adjoint();
    }
  }
  return p;
}

}  // namespace

TEST_CASE("build_theta structure") {
  SUBCASE("printed two-site case") {
    NetworkSpec net(2, 1.0);
    net.set_element(1, 2, BeamSplitter(0.75, 0.0));
    const ThetaMatrix theta = build_theta(coupling_matrix(net), 1.0);
    Eigen::MatrixXcd expect(2, 2);
    expect << 1.0, cxd(0, -0.5), cxd(0, 0.5), 1.0;
    CHECK(testutil::max_abs_diff(theta.matrix, expect) < 1e-15);
  }
  SUBCASE("no couplings: gamma times identity") {
    const ThetaMatrix theta = build_theta(coupling_matrix(NetworkSpec(4, 2.5)), 2.5);
    CHECK(testutil::max_abs_diff(theta.matrix, 2.5 * Eigen::MatrixXcd::Identity(4, 4)) == 0.0);
  }
  SUBCASE("uniform network: unit-modulus off-diagonals") {
    RegularSpec spec;
    spec.sites = 3;
    spec.taus = {0.0, 0.6};
    spec.phis = {0.4, 1.2};
    const ThetaMatrix theta = build_theta(coupling_matrix(expand_regular(spec)), 1.0);
    for (int m = 0; m < 3; ++m) {
      for (int mp = m + 1; mp < 3; ++mp) {
        CHECK(std::abs(theta.matrix(m, mp)) == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
  SUBCASE("hermitian by construction") {
    std::mt19937_64 rng(12);
    const ThetaMatrix theta =
        build_theta(coupling_matrix(testutil::random_network(rng, 5)), 1.0);
    CHECK(testutil::max_abs_diff(theta.matrix, theta.matrix.adjoint()) == 0.0);
  }
}

TEST_CASE("gksl_decompose: rates, reconstruction, ordering, trace") {
  SUBCASE("two-site rates 1 +- |zeta|") {
    NetworkSpec net(2, 1.0);
    net.set_element(1, 2, BeamSplitter(0.75, 0.0));
    const GkslForm form = decompose_network(net);
    CHECK(form.rates(0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(form.rates(1) == doctest::Approx(0.5).epsilon(1e-14));
  }
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const int M = 2 + static_cast<int>(rng() % 5);
    const double loss = (trial % 3 == 0) ? 0.2 : 0.0;
    const NetworkSpec net = testutil::random_network(rng, M, loss);
    const CouplingMatrix zeta = coupling_matrix(net);
    const ThetaMatrix theta = build_theta(zeta, 1.0);
    const GkslForm form = gksl_decompose(theta, zeta);
    // reconstruction
    const Eigen::MatrixXcd re =
        form.lindblad * form.rates.asDiagonal() * form.lindblad.adjoint();
    CHECK((re - theta.matrix).norm() < tol::spectral);
    // unitarity of the coefficient matrix
    CHECK(testutil::unitarity_defect(form.lindblad) < tol::unitarity);
    // descending order, nonnegative
    for (int i = 0; i + 1 < M; ++i) CHECK(form.rates(i) >= form.rates(i + 1));
    CHECK(form.rates(M - 1) >= 0.0);
    // trace rule
    CHECK(form.rates.sum() == doctest::Approx(static_cast<double>(M)).epsilon(1e-12));
  }
}

TEST_CASE("gksl_decompose rejects unphysical couplings") {
  CouplingMatrix fake;
  fake.sites = 2;
  fake.zeta = Eigen::MatrixXcd::Zero(2, 2);
  fake.zeta(0, 1) = 1.5;  // |zeta| > 1 cannot come from a network
  const ThetaMatrix theta = build_theta(fake, 1.0);
  CHECK_THROWS_AS(gksl_decompose(theta, fake), PhysicalityError);
}

TEST_CASE("heff coefficients are Hermitian and match the couplings") {
  std::mt19937_64 rng(14);
  const NetworkSpec net = testutil::random_network(rng, 5);
  const CouplingMatrix zeta = coupling_matrix(net);
  const GkslForm form = decompose_network(net);
  CHECK(testutil::max_abs_diff(form.heff, form.heff.adjoint()) == 0.0);
  for (int m = 0; m < 5; ++m) {
    CHECK(form.heff(m, m) == cxd(0.0, 0.0));
    for (int mp = m + 1; mp < 5; ++mp) {
      CHECK(std::abs(form.heff(m, mp) - cxd(0.0, -0.5) * zeta.zeta(m, mp)) < 1e-15);
    }
  }
}

TEST_CASE("even/odd closed form: printed special cases") {
  SUBCASE("M=4, tau1=1: degenerate pair with parity sums") {
    const GkslForm form = lindblad_closed_form_evenodd(4, 1.0, 1.0);
    CHECK(form.rates(0) == doctest::Approx(2.0));
    CHECK(form.rates(1) == doctest::Approx(2.0));
    CHECK(form.rates(2) == 0.0);
    Eigen::VectorXcd odd(4), even(4);
    odd << 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0), 0;
    even << 0, 1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0);
    CHECK((form.lindblad.col(0) - odd).norm() < 1e-14);
    CHECK((form.lindblad.col(1) - even).norm() < 1e-14);
  }
  SUBCASE("M=4, tau1=0: single collective emitter") {
    const GkslForm form = lindblad_closed_form_evenodd(4, 0.0, 1.0);
    CHECK(form.rates(0) == doctest::Approx(4.0));
    CHECK(form.rates(1) == doctest::Approx(0.0));
  }
  SUBCASE("M=5, tau1=1: odd and even sums with rates 3 and 2") {
    const GkslForm form = lindblad_closed_form_evenodd(5, 1.0, 1.0);
    CHECK(form.rates(0) == doctest::Approx(3.0));
    CHECK(form.rates(1) == doctest::Approx(2.0));
    Eigen::VectorXcd odd = Eigen::VectorXcd::Zero(5), even = Eigen::VectorXcd::Zero(5);
    odd(0) = odd(2) = odd(4) = std::sqrt(2.0 / 6.0);
    even(1) = even(3) = std::sqrt(2.0 / 4.0);
    CHECK((form.lindblad.col(0) - odd).norm() < 1e-14);
    CHECK((form.lindblad.col(1) - even).norm() < 1e-14);
  }
  SUBCASE("completion is unitary") {
    for (double tau1 : {0.0, 0.3, 0.9, 1.0}) {
      for (int M : {2, 3, 4, 5, 6, 7}) {
        CHECK(testutil::unitarity_defect(lindblad_closed_form_evenodd(M, tau1, 1.0).lindblad) <
              tol::unitarity);
      }
    }
  }
}

TEST_CASE("even/odd closed form matches the numeric decomposition") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int M = 2; M <= 6; ++M) {
    for (double tau1 : {0.0, 0.35, unit(rng), 1.0}) {
      // phi1 = -pi/2 puts the network in the closed form's gauge
      const RegularSpec spec = testutil::evenodd_regular(M, tau1, -pi / 2);
      const GkslForm numeric = decompose_network(expand_regular(spec));
      const GkslForm closed = lindblad_closed_form_evenodd(M, tau1, 1.0);
      for (int i = 0; i < M; ++i) {
        CHECK(std::abs(numeric.rates(i) - closed.rates(i)) < tol::spectral);
      }
      // spectral projectors are basis-independent, safe under degeneracy
      const bool degenerate = std::abs(closed.rates(0) - closed.rates(1)) < 1e-8;
      for (int i = 0; i < (degenerate ? 1 : 2); ++i) {
        if (closed.rates(i) <= 1e-12) continue;
        const Eigen::MatrixXcd pn = spectral_projector(numeric, closed.rates(i), 1e-6);
        const Eigen::MatrixXcd pc = spectral_projector(closed, closed.rates(i), 1e-6);
        CHECK((pn - pc).norm() < tol::spectral);
      }
    }
  }
}

TEST_CASE("PSD on random physical networks, with and without loss") {
  std::mt19937_64 rng(16);
  std::uniform_int_distribution<int> sites(2, 6);
  const double losses[] = {0.0, 0.1, 0.5};
  for (int trial = 0; trial < 200; ++trial) {
    const NetworkSpec net = testutil::random_network(rng, sites(rng), losses[trial % 3]);
    const GkslForm form = decompose_network(net);  // throws if any rate < clamp
    CHECK(form.rates.minCoeff() >= 0.0);
  }
}

TEST_CASE("block-doubled rate matrix has the Theta spectrum plus M zeros") {
  std::mt19937_64 rng(17);
  const int M = 5;
  const NetworkSpec net = testutil::random_network(rng, M);
  const ThetaMatrix theta = build_theta(coupling_matrix(net), net.gamma());

  // 2M x 2M block matrix: per-pair 2x2 blocks with the coupling in the
  // lower-right corner; odd rows/columns vanish for vacuum inputs
  Eigen::MatrixXcd omega = Eigen::MatrixXcd::Zero(2 * M, 2 * M);
  for (int m = 0; m < M; ++m) {
    for (int mp = 0; mp < M; ++mp) {
      omega(2 * m + 1, 2 * mp + 1) = theta.matrix(m, mp);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_omega(omega);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es_theta(theta.matrix);
  Eigen::VectorXd expected(2 * M);
  expected.head(M).setZero();
  expected.tail(M) = es_theta.eigenvalues();
  std::sort(expected.data(), expected.data() + 2 * M);
  CHECK((es_omega.eigenvalues() - expected).cwiseAbs().maxCoeff() < 1e-12);
}
