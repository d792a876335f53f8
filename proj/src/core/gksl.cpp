#include "core/gksl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "core/tolerances.hpp"

namespace cascade {

using cxd = std::complex<double>;

ThetaMatrix build_theta(const CouplingMatrix& zeta, double gamma) {
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  const int M = zeta.sites;
  ThetaMatrix theta;
  theta.gamma = gamma;
  theta.matrix = gamma * (Eigen::MatrixXcd::Identity(M, M) + zeta.zeta +
                          zeta.zeta.adjoint());
  return theta;
}

Eigen::MatrixXcd heff_coefficients(const CouplingMatrix& zeta, double gamma) {
  const Eigen::MatrixXcd upper = cxd(0.0, -0.5 * gamma) * zeta.zeta;
  return upper + upper.adjoint();
}

namespace {

void fix_column_phases(Eigen::MatrixXcd& w) {
  for (int i = 0; i < w.cols(); ++i) {
    for (int m = 0; m < w.rows(); ++m) {
      const double mod = std::abs(w(m, i));
      if (mod > 1e-12) {
        w.col(i) *= std::conj(w(m, i)) / mod;
        break;
      }
    }
  }
}

}  // namespace

GkslForm gksl_decompose(const ThetaMatrix& theta, const CouplingMatrix& zeta) {
  const int M = static_cast<int>(theta.matrix.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(theta.matrix);
  if (es.info() != Eigen::Success) {
    throw PhysicalityError("eigendecomposition of Theta failed");
  }

  GkslForm form;
  form.gamma = theta.gamma;
  form.rates.resize(M);
  form.lindblad.resize(M, M);
  // solver returns ascending order; flip to descending
  for (int i = 0; i < M; ++i) {
    double lambda = es.eigenvalues()(M - 1 - i);
    if (lambda < 0.0) {
      if (lambda < tol::rate_clamp) {
        throw PhysicalityError("Theta eigenvalue " + std::to_string(lambda) +
                               " below tolerance: coupling matrix is not physical");
      }
      lambda = 0.0;
    }
    form.rates(i) = lambda;
    form.lindblad.col(i) = es.eigenvectors().col(M - 1 - i);
  }
  fix_column_phases(form.lindblad);
  form.heff = heff_coefficients(zeta, theta.gamma);
  return form;
}

namespace {

// Orthonormal completion: returns a full unitary whose leading columns are
// the given orthonormal vectors.
Eigen::MatrixXcd complete_unitary(const std::vector<Eigen::VectorXcd>& cols, int M) {
  Eigen::MatrixXcd w(M, M);
  int filled = 0;
  for (const auto& c : cols) w.col(filled++) = c;
  for (int e = 0; e < M && filled < M; ++e) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(M);
    v(e) = 1.0;
    for (int j = 0; j < filled; ++j) v -= w.col(j).dot(v) * w.col(j);
    const double n = v.norm();
    if (n > 1e-8) w.col(filled++) = v / n;
  }
  if (filled != M) throw PhysicalityError("failed to complete Lindblad basis");
  return w;
}

Eigen::MatrixXcd evenodd_heff(int M, double tau1, double gamma) {
  const double s = std::sqrt(1.0 - tau1);
  CouplingMatrix z;
  z.sites = M;
  z.zeta = Eigen::MatrixXcd::Zero(M, M);
  for (int m = 0; m < M; ++m) {
    for (int mp = m + 1; mp < M; ++mp) {
      z.zeta(m, mp) = ((mp - m) % 2 == 1) ? s : 1.0;
    }
  }
  return heff_coefficients(z, gamma);
}

}  // namespace

GkslForm lindblad_closed_form_evenodd(int sites, double tau1, double gamma) {
  if (sites < 2) throw ValidationError("even/odd closed form needs at least 2 sites");
  if (!(tau1 >= 0.0 && tau1 <= 1.0)) {
    throw ValidationError("tau1 " + std::to_string(tau1) + " outside [0,1]");
  }
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");

  const int M = sites;
  const double s = std::sqrt(1.0 - tau1);
  const int n_odd = (M + 1) / 2;   // sites 1,3,5,...
  const int n_even = M / 2;        // sites 2,4,6,...

  GkslForm form;
  form.gamma = gamma;
  form.rates = Eigen::VectorXd::Zero(M);
  form.heff = evenodd_heff(M, tau1, gamma);

  Eigen::VectorXcd v_plus(M), v_minus(M);
  double rate_plus = 0.0, rate_minus = 0.0;

  if (tau1 == 1.0) {
    // degenerate pair: odd-site and even-site sums decouple
    rate_plus = (M % 2 == 0) ? M * gamma / 2.0 : (M + 1) * gamma / 2.0;
    rate_minus = (M % 2 == 0) ? M * gamma / 2.0 : (M - 1) * gamma / 2.0;
    v_plus.setZero();
    v_minus.setZero();
    for (int m = 1; m <= M; ++m) {
      if (m % 2 == 1) v_plus(m - 1) = 1.0 / std::sqrt(static_cast<double>(n_odd));
      else v_minus(m - 1) = 1.0 / std::sqrt(static_cast<double>(n_even));
    }
  } else if (M % 2 == 0) {
    rate_plus = M * gamma * (1.0 + s) / 2.0;
    rate_minus = M * gamma * (1.0 - s) / 2.0;
    for (int m = 1; m <= M; ++m) {
      v_plus(m - 1) = 1.0 / std::sqrt(static_cast<double>(M));       // (-1)^{2m}
      v_minus(m - 1) = ((m % 2 == 0) ? 1.0 : -1.0) / std::sqrt(static_cast<double>(M));
    }
  } else {
    const double root = std::sqrt(M * M - (M * M - 1.0) * tau1);
    rate_plus = gamma * (M + root) / 2.0;
    rate_minus = gamma * (M - root) / 2.0;
    // unnormalized: 1 on odd sites, c on even sites
    const double c_plus = (-1.0 + root) / ((M - 1) * s);
    const double c_minus = (-1.0 - root) / ((M - 1) * s);
    for (int m = 1; m <= M; ++m) {
      v_plus(m - 1) = (m % 2 == 1) ? 1.0 : c_plus;
      v_minus(m - 1) = (m % 2 == 1) ? 1.0 : c_minus;
    }
    v_plus /= v_plus.norm();
    v_minus /= v_minus.norm();
  }

  form.rates(0) = std::max(rate_plus, rate_minus);
  form.rates(1) = std::min(rate_plus, rate_minus);
  std::vector<Eigen::VectorXcd> leading;
  if (rate_plus >= rate_minus) {
    leading = {v_plus, v_minus};
  } else {
    leading = {v_minus, v_plus};
  }
  form.lindblad = complete_unitary(leading, M);
  return form;
}

}  // namespace cascade
