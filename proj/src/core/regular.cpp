#include "core/regular.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "core/amplitudes.hpp"
#include "core/tolerances.hpp"

namespace cascade {

using cxd = std::complex<double>;

TransferMatrix transfer_matrix(const std::vector<double>& taus,
                               const std::vector<double>& phis) {
  if (phis.empty()) throw ValidationError("transfer matrix needs at least one phase");
  if (taus.size() + 1 != phis.size()) {
    throw ValidationError("transfer matrix wants K-1 transmissivities and K phases, got " +
                          std::to_string(taus.size()) + " and " + std::to_string(phis.size()));
  }
  const int K = static_cast<int>(phis.size());
  std::vector<double> tau(taus);
  tau.push_back(0.0);  // tau_K = 0 closes the active block
  for (int i = 0; i < K; ++i) {
    if (!(tau[static_cast<size_t>(i)] >= 0.0 && tau[static_cast<size_t>(i)] <= 1.0)) {
      throw ValidationError("tau_" + std::to_string(i + 1) + " outside [0,1]");
    }
  }

  // boundary convention: the factor -i*sqrt(1-tau_0) is replaced by 1
  auto upper_factor = [&](int j) -> cxd {
    if (j == 1) return cxd(1.0, 0.0);
    return cxd(0.0, -std::sqrt(1.0 - tau[static_cast<size_t>(j - 2)]));
  };

  TransferMatrix t;
  t.active_channels = K;
  t.matrix = Eigen::MatrixXcd::Zero(K, K);
  for (int i = 1; i <= K; ++i) {
    const cxd ph = std::polar(1.0, -phis[static_cast<size_t>(i - 1)]);
    const cxd refl_i(0.0, -std::sqrt(1.0 - tau[static_cast<size_t>(i - 1)]));
    for (int j = 1; j <= K; ++j) {
      if (j == i + 1) {
        t.matrix(i - 1, j - 1) = ph * std::sqrt(tau[static_cast<size_t>(i - 1)]);
      } else if (j == i) {
        t.matrix(i - 1, j - 1) = ph * refl_i * upper_factor(i);
      } else if (j < i) {
        double trans = 1.0;
        for (int l = j; l <= i - 1; ++l) trans *= std::sqrt(tau[static_cast<size_t>(l - 1)]);
        t.matrix(i - 1, j - 1) = ph * upper_factor(j) * trans * refl_i;
      }
    }
  }
  return t;
}

namespace {

XiProfile xi_by_powering(const Eigen::MatrixXcd& t, int kmax) {
  XiProfile out;
  out.xi.reserve(static_cast<size_t>(kmax));
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(t.rows());
  v(0) = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    v = t * v;
    out.xi.push_back(v(0));
  }
  return out;
}

}  // namespace

XiProfile xi_profile_closed(const TransferMatrix& t, int kmax) {
  if (kmax < 1) throw ValidationError("kmax must be at least 1");
  const Eigen::MatrixXcd& m = t.matrix;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(m);
  bool ok = ces.info() == Eigen::Success;
  Eigen::VectorXcd coeff;
  if (ok) {
    const Eigen::MatrixXcd& u = ces.eigenvectors();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(u);
    coeff = lu.solve(Eigen::VectorXcd::Unit(m.rows(), 0));
    const double resid =
        (u * ces.eigenvalues().asDiagonal() * lu.solve(Eigen::MatrixXcd::Identity(m.rows(), m.rows())) - m)
            .norm();
    ok = std::isfinite(resid) && resid < 1e-8;
  }
  if (!ok) {
    // defective or badly conditioned eigenbasis: power the (unitary) matrix
    return xi_by_powering(m, kmax);
  }
  XiProfile out;
  out.xi.reserve(static_cast<size_t>(kmax));
  Eigen::VectorXcd dk = Eigen::VectorXcd::Ones(m.rows());
  const Eigen::RowVectorXcd first = ces.eigenvectors().row(0);
  for (int k = 1; k <= kmax; ++k) {
    dk = dk.cwiseProduct(ces.eigenvalues());
    out.xi.push_back(first * dk.cwiseProduct(coeff));
  }
  return out;
}

XiProfile xi_profile(const RegularSpec& spec, int kmax) {
  if (kmax < 1 || kmax > spec.sites - 1) {
    throw ValidationError("kmax " + std::to_string(kmax) + " out of range [1," +
                          std::to_string(spec.sites - 1) + "]");
  }
  const CouplingMatrix zeta = coupling_matrix(expand_regular(spec));
  XiProfile out;
  out.loss = spec.loss;
  out.xi.reserve(static_cast<size_t>(kmax));
  for (int k = 1; k <= kmax; ++k) out.xi.push_back(zeta.zeta(0, k));
  return out;
}

XiProfile xi_k2_analytic(double tau1, double phi1, double phi2, int kmax, bool* used_fallback) {
  if (!(tau1 >= 0.0 && tau1 <= 1.0)) throw ValidationError("tau1 outside [0,1]");
  if (kmax < 1) throw ValidationError("kmax must be at least 1");
  if (used_fallback) *used_fallback = false;

  const double s = std::sqrt(1.0 - tau1);
  const cxd e1 = std::polar(1.0, -phi1);
  const cxd e2 = std::polar(1.0, -phi2);
  const cxd iu(0.0, 1.0);
  // one square root shared by eigenvalues and eigenvector components keeps
  // the +/- labels paired
  const cxd disc = (e2 - iu * e1) * (e2 - iu * e1) - tau1 * (iu * e1 + e2) * (iu * e1 + e2);
  const cxd root = std::sqrt(disc);
  const cxd lam_p = 0.5 * (-s * (iu * e1 + e2) + root);
  const cxd lam_m = 0.5 * (-s * (iu * e1 + e2) - root);
  const cxd z = std::polar(1.0, -(phi1 - phi2));
  const cxd u_p = s * (z + iu) + iu * std::polar(1.0, phi2) * root;
  const cxd u_m = s * (z + iu) - iu * std::polar(1.0, phi2) * root;

  if (std::abs(u_p - u_m) < 1e-12 * std::max(1.0, std::abs(u_p) + std::abs(u_m))) {
    if (used_fallback) *used_fallback = true;
    return xi_profile_closed(transfer_matrix({tau1}, {phi1, phi2}), kmax);
  }

  XiProfile out;
  out.xi.reserve(static_cast<size_t>(kmax));
  cxd pp = 1.0, pm = 1.0;
  for (int k = 1; k <= kmax; ++k) {
    pp *= lam_p;
    pm *= lam_m;
    out.xi.push_back((u_p * pp - u_m * pm) / (u_p - u_m));
  }
  return out;
}

namespace {

// Recursion in delta = 1 - tau space; products of small reflections stay
// accurate where 1 - tau would round away.
struct DeltaRecursion {
  std::vector<double> deltas;  // delta_1 .. ; may leave [0,1]
  double prod = 1.0;           // running product of tau_j

  explicit DeltaRecursion(double tau_base) {
    deltas.push_back(1.0 - tau_base);
    prod = tau_base;
  }
  double step() {
    const double d_prev = deltas.back();
    const double d = ((1.0 - prod) / prod) * (d_prev / (1.0 - d_prev));
    deltas.push_back(d);
    prod *= (1.0 - d);
    return d;
  }
};

}  // namespace

std::vector<double> pruning_recursion(double tau_base, int count) {
  if (count < 1) throw ValidationError("count must be at least 1");
  if (!(tau_base > 0.0 && tau_base <= 1.0)) {
    throw ValidationError("tau_base " + std::to_string(tau_base) +
                          " outside (0,1]: recursion divides by the transmissivity product");
  }
  DeltaRecursion rec(tau_base);
  std::vector<double> taus{tau_base};
  for (int k = 2; k <= count; ++k) taus.push_back(1.0 - rec.step());
  return taus;
}

namespace {

// xi_k of the partial schedule as a function of the trial phase of the k-th
// diagonal (all other entries fixed).
cxd xi_k_with_phase(const std::vector<double>& taus, const std::vector<double>& phis,
                    int k, double trial_phase) {
  RegularSpec spec;
  spec.sites = k + 1;
  spec.taus.assign(taus.begin(), taus.begin() + k);
  spec.phis.assign(phis.begin(), phis.begin() + (k - 1));
  spec.phis.push_back(trial_phase);
  const NetworkSpec net = expand_regular(spec);
  return coupling_matrix(net).zeta(0, k);
}

}  // namespace

DesignSchedule design_pruned(int order, double tau_base, double phi_base, int count) {
  if (order < 1) throw ValidationError("order must be at least 1");
  if (count < order) {
    throw ValidationError("count " + std::to_string(count) + " must reach the retained order " +
                          std::to_string(order));
  }
  if (!(tau_base >= 0.0 && tau_base <= 1.0)) {
    throw ValidationError("tau_base " + std::to_string(tau_base) + " outside [0,1]");
  }
  if (!std::isfinite(phi_base)) throw ValidationError("phi_base must be finite");
  if (tau_base == 0.0) {
    throw PhysicalityError("tau_base 0 retains a unit coupling but admits no pruning "
                           "(recursion leaves [0,1] at k=" + std::to_string(2 * order) + ")");
  }

  // active transmissivities at k = order, 2*order, ...; tau_k = 1 elsewhere
  const int n_active = count / order;
  DeltaRecursion rec(tau_base);
  std::vector<double> active{tau_base};
  for (int j = 2; j <= n_active; ++j) {
    const double d = rec.step();
    if (!(d >= 0.0 && d <= 1.0)) {
      const int k = j * order;
      throw PhysicalityError("pruning recursion leaves [0,1] at k=" + std::to_string(k) +
                             ": tau_" + std::to_string(k) + " = " + std::to_string(1.0 - d) +
                             " (tau_base below the feasibility threshold)");
    }
    active.push_back(1.0 - d);
  }

  DesignSchedule sched;
  sched.order = order;
  sched.taus.resize(static_cast<size_t>(count), 1.0);
  sched.phis.resize(static_cast<size_t>(count), 0.0);
  for (int j = 1; j <= n_active; ++j) {
    sched.taus[static_cast<size_t>(j * order - 1)] = active[static_cast<size_t>(j - 1)];
  }
  sched.phis[static_cast<size_t>(order - 1)] = reduce_phase(phi_base);

  // Each pruned coupling is affine in e^{-i phi_k}; two probes determine the
  // cancelling phase.
  for (int k = order + 1; k <= count; ++k) {
    if (k % order != 0) continue;  // tau_k = 1, no reflection to rephase
    const cxd x0 = xi_k_with_phase(sched.taus, sched.phis, k, 0.0);
    const cxd xpi = xi_k_with_phase(sched.taus, sched.phis, k, std::numbers::pi);
    const cxd r = 0.5 * (x0 - xpi);
    const cxd c = 0.5 * (x0 + xpi);
    if (std::abs(r) == 0.0) continue;  // coupling already dead (tau_base = 1)
    const cxd u = -c / r;
    sched.phis[static_cast<size_t>(k - 1)] = reduce_phase(-std::arg(u));
  }

  // self-check is part of the contract, not just of the tests
  RegularSpec spec;
  spec.sites = count + 1;
  spec.taus = sched.taus;
  spec.phis = sched.phis;
  const XiProfile profile = xi_profile(spec, count);
  sched.retained_modulus = std::abs(profile.xi[static_cast<size_t>(order - 1)]);
  sched.max_pruned_residual = 0.0;
  for (int k = 1; k <= count; ++k) {
    if (k == order) continue;
    sched.max_pruned_residual =
        std::max(sched.max_pruned_residual, std::abs(profile.xi[static_cast<size_t>(k - 1)]));
  }
  const double expected = std::sqrt(1.0 - tau_base);
  if (sched.max_pruned_residual > tol::design_residual ||
      std::abs(sched.retained_modulus - expected) > tol::design_residual) {
    throw PhysicalityError(
        "pruned design failed verification: residual " +
        std::to_string(sched.max_pruned_residual) + ", retained " +
        std::to_string(sched.retained_modulus) + " vs " + std::to_string(expected) +
        " (couplings this small exceed double precision when tau_base approaches 1)");
  }
  return sched;
}

namespace {

bool recursion_feasible(double tau_base, int k) {
  if (!(tau_base > 0.0)) return false;
  if (tau_base >= 1.0) return true;
  DeltaRecursion rec(tau_base);
  for (int j = 2; j <= k; ++j) {
    const double d = rec.step();
    if (!(d >= 0.0 && d <= 1.0)) return false;
  }
  return true;
}

}  // namespace

double threshold_scan(int k, double grid, bool refine) {
  if (k < 2) throw ValidationError("threshold scan needs k >= 2");
  if (!(grid > 0.0 && grid < 1.0)) throw ValidationError("grid step outside (0,1)");
  long i = 0;
  double found = 1.0;
  for (;; ++i) {
    const double tb = static_cast<double>(i) * grid;
    if (tb >= 1.0) {
      found = 1.0;
      break;
    }
    if (recursion_feasible(tb, k)) {
      found = tb;
      break;
    }
  }
  if (!refine || i == 0) return found;
  double lo = static_cast<double>(i - 1) * grid;  // infeasible
  double hi = found;                              // feasible
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (recursion_feasible(mid, k)) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace cascade
