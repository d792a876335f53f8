#include "core/dynamics.hpp"

#include <cmath>
#include <string>

#include "core/amplitudes.hpp"
#include "core/tolerances.hpp"

namespace cascade {

using cxd = std::complex<double>;
using SpMat = Eigen::SparseMatrix<cxd>;

namespace {

SpMat sparse_kron(const SpMat& a, const SpMat& b) {
  SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Eigen::Triplet<cxd>> trip;
  trip.reserve(static_cast<size_t>(a.nonZeros()) * static_cast<size_t>(b.nonZeros()));
  for (int ka = 0; ka < a.outerSize(); ++ka) {
    for (SpMat::InnerIterator ia(a, ka); ia; ++ia) {
      for (int kb = 0; kb < b.outerSize(); ++kb) {
        for (SpMat::InnerIterator ib(b, kb); ib; ++ib) {
          trip.emplace_back(ia.row() * b.rows() + ib.row(), ia.col() * b.cols() + ib.col(),
                            ia.value() * ib.value());
        }
      }
    }
  }
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpMat sparse_identity(Eigen::Index n) {
  SpMat id(n, n);
  id.setIdentity();
  return id;
}

// a_m acting on the full chain, site 1 leftmost
SpMat site_lowering(int sites, int d, int site) {
  const Eigen::MatrixXcd a = lowering_operator(d);
  SpMat op = a.sparseView();
  if (site > 1) op = sparse_kron(sparse_identity(static_cast<Eigen::Index>(std::pow(d, site - 1))), op);
  if (site < sites) {
    op = sparse_kron(op, sparse_identity(static_cast<Eigen::Index>(std::pow(d, sites - site))));
  }
  return op;
}

SpMat left_mult(const SpMat& op) {  // op * rho
  return sparse_kron(sparse_identity(op.rows()), op);
}

SpMat right_mult(const SpMat& op) {  // rho * op
  return sparse_kron(SpMat(op.transpose()), sparse_identity(op.rows()));
}

SpMat sandwich(const SpMat& a, const SpMat& b) {  // a * rho * b
  return sparse_kron(SpMat(b.transpose()), a);
}

void check_dimension_cap(int sites, int d, bool override_cap) {
  if (d < 2) throw ValidationError("local dimension must be at least 2");
  if (sites < 1) throw ValidationError("site count must be positive");
  const double log2_vec = 2.0 * sites * std::log2(static_cast<double>(d));
  if (!override_cap && log2_vec > 24.0 + 1e-9) {
    throw ResourceError("vectorized state has d^(2M) = 2^" + std::to_string(log2_vec) +
                        " entries, beyond the 2^24 cap; override to proceed");
  }
  if (log2_vec > 2 * 26.0) {
    throw ResourceError("d^(2M) exceeds 2^52; refusing regardless of override");
  }
}

std::vector<SpMat> all_lowerings(int sites, int d) {
  std::vector<SpMat> ops;
  ops.reserve(static_cast<size_t>(sites));
  for (int m = 1; m <= sites; ++m) ops.push_back(site_lowering(sites, d, m));
  return ops;
}

// gamma/2 (2 a rho a^dag - {a^dag a, rho}) for one damping channel
SpMat damping_channel(const SpMat& a, double rate) {
  const SpMat ad = SpMat(a.adjoint());
  const SpMat n = SpMat(ad * a);
  return (rate / 2.0) * SpMat(2.0 * sandwich(a, ad) - left_mult(n) - right_mult(n));
}

}  // namespace

Eigen::MatrixXcd lowering_operator(int local_dim) {
  if (local_dim < 2) throw ValidationError("local dimension must be at least 2");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(local_dim, local_dim);
  for (int j = 1; j < local_dim; ++j) a(j - 1, j) = std::sqrt(static_cast<double>(j));
  return a;
}

TruncatedState fock_product_state(int sites, int local_dim, const std::vector<int>& occupations) {
  if (static_cast<int>(occupations.size()) != sites) {
    throw ValidationError("need one occupation per site");
  }
  Eigen::Index index = 0;
  for (int m = 0; m < sites; ++m) {
    const int n = occupations[static_cast<size_t>(m)];
    if (n < 0 || n >= local_dim) {
      throw ValidationError("occupation " + std::to_string(n) + " at site " +
                            std::to_string(m + 1) + " outside [0," +
                            std::to_string(local_dim - 1) + "]");
    }
    index = index * local_dim + n;
  }
  const Eigen::Index dim = static_cast<Eigen::Index>(std::pow(local_dim, sites));
  TruncatedState st;
  st.sites = sites;
  st.local_dim = local_dim;
  st.rho = Eigen::MatrixXcd::Zero(dim, dim);
  st.rho(index, index) = 1.0;
  return st;
}

void validate_state(const TruncatedState& state, const std::string& context) {
  const std::string where = context.empty() ? "" : " (" + context + ")";
  const double tr_err = std::abs(state.rho.trace() - 1.0);
  if (tr_err > tol::state_trace) {
    throw PhysicalityError("state trace deviates by " + std::to_string(tr_err) + where);
  }
  const double herm_err = (state.rho - state.rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > tol::state_hermiticity) {
    throw PhysicalityError("state Hermiticity deviates by " + std::to_string(herm_err) + where);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (state.rho + state.rho.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < tol::state_positivity) {
    throw PhysicalityError("state eigenvalue " + std::to_string(min_eig) +
                           " below positivity tolerance" + where);
  }
}

double population(const TruncatedState& state, int site) {
  const SpMat a = site_lowering(state.sites, state.local_dim, site);
  return (SpMat(a.adjoint() * a) * state.rho).trace().real();
}

cxd site_moment(const TruncatedState& state, int site) {
  const SpMat a = site_lowering(state.sites, state.local_dim, site);
  return (a * state.rho).trace();
}

Superoperator cascade_generator(const NetworkSpec& net, int local_dim, bool override_cap) {
  const int M = net.sites();
  check_dimension_cap(M, local_dim, override_cap);
  const double g = net.gamma();
  const CouplingMatrix zeta = coupling_matrix(net);
  const std::vector<SpMat> a = all_lowerings(M, local_dim);

  const Eigen::Index dim2 = a[0].rows() * a[0].rows();
  Superoperator s;
  s.sites = M;
  s.local_dim = local_dim;
  s.matrix = SpMat(dim2, dim2);
  for (int m = 0; m < M; ++m) s.matrix += damping_channel(a[static_cast<size_t>(m)], g);
  for (int m = 0; m < M; ++m) {
    for (int mp = m + 1; mp < M; ++mp) {
      const cxd z = zeta.zeta(m, mp);
      if (z == cxd(0.0, 0.0)) continue;
      const SpMat& am = a[static_cast<size_t>(m)];
      const SpMat& ap = a[static_cast<size_t>(mp)];
      const SpMat ap_dag = SpMat(ap.adjoint());
      const SpMat am_dag = SpMat(am.adjoint());
      // gamma zeta a_m [rho, a_m'^dag] + gamma zeta* [a_m', rho] a_m^dag
      s.matrix += (g * z) * SpMat(sandwich(am, ap_dag) - left_mult(SpMat(ap_dag * am)));
      s.matrix += (g * std::conj(z)) * SpMat(sandwich(ap, am_dag) - right_mult(SpMat(am_dag * ap)));
    }
  }
  return s;
}

Superoperator gksl_generator(const GkslForm& form, int local_dim, bool override_cap) {
  const int M = static_cast<int>(form.rates.size());
  check_dimension_cap(M, local_dim, override_cap);
  const std::vector<SpMat> a = all_lowerings(M, local_dim);
  const Eigen::Index dim = a[0].rows();

  Superoperator s;
  s.sites = M;
  s.local_dim = local_dim;
  s.matrix = SpMat(dim * dim, dim * dim);

  // H_eff = sum_{m != m'} h(m,m') a_m a_m'^dag
  SpMat h(dim, dim);
  for (int m = 0; m < M; ++m) {
    for (int mp = 0; mp < M; ++mp) {
      if (m == mp) continue;
      const cxd c = form.heff(m, mp);
      if (c == cxd(0.0, 0.0)) continue;
      h += c * SpMat(a[static_cast<size_t>(m)] * SpMat(a[static_cast<size_t>(mp)].adjoint()));
    }
  }
  s.matrix += cxd(0.0, -1.0) * SpMat(left_mult(h) - right_mult(h));

  for (int i = 0; i < M; ++i) {
    if (form.rates(i) == 0.0) continue;
    SpMat L(dim, dim);
    for (int m = 0; m < M; ++m) {
      const cxd c = form.lindblad(m, i);
      if (c != cxd(0.0, 0.0)) L += c * a[static_cast<size_t>(m)];
    }
    s.matrix += damping_channel(L, form.rates(i));
  }
  return s;
}

namespace {

Eigen::VectorXcd rk4_run(const SpMat& gen, Eigen::VectorXcd v, double t_final, double dt) {
  double t = 0.0;
  while (t < t_final - 1e-15 * std::max(1.0, t_final)) {
    const double h = std::min(dt, t_final - t);
    const Eigen::VectorXcd k1 = gen * v;
    const Eigen::VectorXcd k2 = gen * Eigen::VectorXcd(v + (h / 2.0) * k1);
    const Eigen::VectorXcd k3 = gen * Eigen::VectorXcd(v + (h / 2.0) * k2);
    const Eigen::VectorXcd k4 = gen * Eigen::VectorXcd(v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
  }
  return v;
}

}  // namespace

Trajectory evolve(const Superoperator& gen, const TruncatedState& rho0, double t_final,
                  double dt, int stride, bool estimate_convergence) {
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  if (!(t_final >= 0.0)) throw ValidationError("t_final must be nonnegative");
  if (stride < 1) throw ValidationError("stride must be at least 1");
  const Eigen::Index dim = rho0.rho.rows();
  if (dim * dim != gen.matrix.rows()) {
    throw ValidationError("state dimension does not match the generator");
  }
  validate_state(rho0, "initial state");

  Trajectory traj;
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.rho.data(), dim * dim);

  auto emit = [&](double t, const Eigen::VectorXcd& vec) {
    TruncatedState st;
    st.sites = rho0.sites;
    st.local_dim = rho0.local_dim;
    st.rho = Eigen::Map<const Eigen::MatrixXcd>(vec.data(), dim, dim);
    validate_state(st, "t=" + std::to_string(t) + "; dt may be too large");
    traj.times.push_back(t);
    traj.states.push_back(std::move(st));
  };

  emit(0.0, v);
  double t = 0.0;
  long step = 0;
  while (t < t_final - 1e-15 * std::max(1.0, t_final)) {
    const double h = std::min(dt, t_final - t);
    const Eigen::VectorXcd k1 = gen.matrix * v;
    const Eigen::VectorXcd k2 = gen.matrix * Eigen::VectorXcd(v + (h / 2.0) * k1);
    const Eigen::VectorXcd k3 = gen.matrix * Eigen::VectorXcd(v + (h / 2.0) * k2);
    const Eigen::VectorXcd k4 = gen.matrix * Eigen::VectorXcd(v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    ++step;
    const bool last = !(t < t_final - 1e-15 * std::max(1.0, t_final));
    if (step % stride == 0 || last) emit(t, v);
  }

  if (estimate_convergence && t_final > 0.0) {
    const Eigen::VectorXcd v0 = Eigen::Map<const Eigen::VectorXcd>(rho0.rho.data(), dim * dim);
    const Eigen::VectorXcd half = rk4_run(gen.matrix, v0, t_final, dt / 2.0);
    traj.convergence_error = (half - v).cwiseAbs().maxCoeff();
  }
  return traj;
}

Eigen::MatrixXcd first_moment_drift(const CouplingMatrix& zeta, double gamma) {
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
  const int M = zeta.sites;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(M, M);
  for (int m = 0; m < M; ++m) {
    g(m, m) = -gamma / 2.0;
    for (int mp = m + 1; mp < M; ++mp) g(mp, m) = -gamma * zeta.zeta(m, mp);
  }
  return g;
}

}  // namespace cascade
