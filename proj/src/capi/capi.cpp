#include "cascade/cascade.h"

#include <complex>
#include <cstring>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "core/amplitudes.hpp"
#include "core/dynamics.hpp"
#include "core/errors.hpp"
#include "core/gksl.hpp"
#include "core/network.hpp"
#include "core/regular.hpp"
#include "core/spec_io.hpp"
#include "core/tolerances.hpp"

using cxd = std::complex<double>;

struct cascade_network {
  cascade::NetworkSpec net;
  std::optional<cascade::RegularSpec> regular;
};

struct cascade_sim {
  int sites = 0;
  std::vector<double> times;
  std::vector<double> populations;  // sample-major, sites per sample
  std::vector<cxd> moments;
  double convergence_error = 0.0;
};

namespace {

thread_local std::string g_last_error;

cascade_status fail(cascade_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
cascade_status guarded(Fn&& fn) {
  try {
    fn();
    return CASCADE_OK;
  } catch (const cascade::Error& e) {
    return fail(static_cast<cascade_status>(static_cast<int>(e.kind())), e.what());
  } catch (const std::exception& e) {
    return fail(CASCADE_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(CASCADE_ERROR_INTERNAL, "unknown error");
  }
}

void write_complex_matrix(const Eigen::MatrixXcd& m, double* out) {
  if (!out) return;
  size_t idx = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out[idx++] = m(r, c).real();
      out[idx++] = m(r, c).imag();
    }
  }
}

void require(bool cond, const std::string& msg) {
  if (!cond) throw cascade::ValidationError(msg);
}

// Validates that the handle describes the even/odd network family and
// returns (tau1, phi1).
std::pair<double, double> evenodd_params(const cascade_network* net) {
  require(net != nullptr, "null network handle");
  require(net->regular.has_value(), "even/odd comparison needs a regular spec");
  const cascade::RegularSpec& r = *net->regular;
  require(r.sites >= 2, "even/odd comparison needs at least 2 sites");
  if (r.sites >= 3) {
    require(std::abs(r.taus[1]) <= 1e-12, "even/odd network requires tau_2 = 0");
    const double dphi = cascade::reduce_phase(r.phis[1] - r.phis[0]);
    require(std::abs(dphi - std::numbers::pi / 2.0) <= 1e-9,
            "even/odd network requires phi_2 = phi_1 + pi/2");
  }
  return {r.taus[0], r.phis[0]};
}

}  // namespace

extern "C" {

const char* cascade_last_error(void) { return g_last_error.c_str(); }

const char* cascade_version(void) { return "0.1.0"; }

void cascade_string_free(char* s) { delete[] s; }

cascade_status cascade_network_parse(const char* json_text, cascade_network** out) {
  return guarded([&] {
    require(json_text && out, "null argument");
    cascade::LoadedSpec spec = cascade::parse_spec_json(json_text);
    *out = new cascade_network{std::move(spec.network), std::move(spec.regular)};
  });
}

cascade_status cascade_network_load(const char* path, cascade_network** out) {
  return guarded([&] {
    require(path && out, "null argument");
    cascade::LoadedSpec spec = cascade::load_spec_file(path);
    *out = new cascade_network{std::move(spec.network), std::move(spec.regular)};
  });
}

cascade_status cascade_network_regular(int sites, const double* taus, const double* phis,
                                       int count, double loss, double gamma,
                                       cascade_network** out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    require(count == sites - 1, "regular network needs M-1 parameter pairs");
    require(count == 0 || (taus && phis), "null parameter arrays");
    cascade::RegularSpec spec;
    spec.sites = sites;
    spec.taus.assign(taus, taus + count);
    spec.phis.assign(phis, phis + count);
    spec.loss = loss;
    spec.gamma = gamma;
    cascade::NetworkSpec net = cascade::expand_regular(spec);
    *out = new cascade_network{std::move(net), std::move(spec)};
  });
}

void cascade_network_free(cascade_network* net) { delete net; }

int cascade_network_sites(const cascade_network* net) { return net ? net->net.sites() : 0; }

double cascade_network_gamma(const cascade_network* net) {
  return net ? net->net.gamma() : 0.0;
}

double cascade_network_loss(const cascade_network* net) { return net ? net->net.loss() : 0.0; }

int cascade_network_is_regular(const cascade_network* net) {
  return (net && net->regular.has_value()) ? 1 : 0;
}

cascade_status cascade_network_regular_params(const cascade_network* net, double* taus,
                                              double* phis) {
  return guarded([&] {
    require(net != nullptr, "null network handle");
    require(net->regular.has_value(), "network was not built from a regular spec");
    const cascade::RegularSpec& r = *net->regular;
    for (size_t k = 0; k < r.taus.size(); ++k) {
      if (taus) taus[k] = r.taus[k];
      if (phis) phis[k] = r.phis[k];
    }
  });
}

cascade_status cascade_network_to_json(const cascade_network* net, char** out_json) {
  return guarded([&] {
    require(net && out_json, "null argument");
    const std::string s = net->regular.has_value()
                              ? cascade::regular_spec_to_json(*net->regular)
                              : cascade::network_spec_to_json(net->net);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out_json = buf;
  });
}

cascade_status cascade_coupling_matrix(const cascade_network* net, double* zeta_out) {
  return guarded([&] {
    require(net && zeta_out, "null argument");
    write_complex_matrix(cascade::coupling_matrix(net->net).zeta, zeta_out);
  });
}

cascade_status cascade_coupling_matrix_oracle(const cascade_network* net, double* zeta_out) {
  return guarded([&] {
    require(net && zeta_out, "null argument");
    write_complex_matrix(cascade::coupling_matrix_oracle(net->net).zeta, zeta_out);
  });
}

cascade_status cascade_gksl_decompose(const cascade_network* net, double* rates_out,
                                      double* lindblad_out, double* heff_out) {
  return guarded([&] {
    require(net != nullptr, "null network handle");
    const cascade::CouplingMatrix zeta = cascade::coupling_matrix(net->net);
    const cascade::ThetaMatrix theta = cascade::build_theta(zeta, net->net.gamma());
    const cascade::GkslForm form = cascade::gksl_decompose(theta, zeta);
    if (rates_out) {
      for (int i = 0; i < form.rates.size(); ++i) rates_out[i] = form.rates(i);
    }
    write_complex_matrix(form.lindblad, lindblad_out);
    write_complex_matrix(form.heff, heff_out);
  });
}

cascade_status cascade_gksl_evenodd_closed_form(int sites, double tau1, double gamma,
                                                double* rates_out, double* lindblad_out,
                                                double* heff_out) {
  return guarded([&] {
    const cascade::GkslForm form = cascade::lindblad_closed_form_evenodd(sites, tau1, gamma);
    if (rates_out) {
      for (int i = 0; i < form.rates.size(); ++i) rates_out[i] = form.rates(i);
    }
    write_complex_matrix(form.lindblad, lindblad_out);
    write_complex_matrix(form.heff, heff_out);
  });
}

cascade_status cascade_gksl_evenodd_compare(const cascade_network* net, double* max_rate_dev,
                                            double* max_projector_dev) {
  return guarded([&] {
    const auto [tau1, phi1] = evenodd_params(net);
    const int M = net->net.sites();
    const double gamma = net->net.gamma();

    const cascade::CouplingMatrix zeta = cascade::coupling_matrix(net->net);
    const cascade::GkslForm numeric =
        cascade::gksl_decompose(cascade::build_theta(zeta, gamma), zeta);
    const cascade::GkslForm closed = cascade::lindblad_closed_form_evenodd(M, tau1, gamma);

    double rate_dev = 0.0;
    for (int i = 0; i < M; ++i) rate_dev = std::max(rate_dev, std::abs(numeric.rates(i) - closed.rates(i)));

    // gauge that turns the closed form's real profile into this network's
    Eigen::VectorXcd gauge(M);
    for (int m = 0; m < M; ++m) {
      gauge(m) = std::polar(1.0, (m + 1) * (phi1 + std::numbers::pi / 2.0));
    }

    // group the two nonzero closed-form rates (they may be degenerate)
    std::vector<std::vector<int>> groups;
    if (std::abs(closed.rates(0) - closed.rates(1)) < 1e-8) {
      groups = {{0, 1}};
    } else {
      groups = {{0}, {1}};
    }
    double proj_dev = 0.0;
    for (const auto& group : groups) {
      Eigen::MatrixXcd p_closed = Eigen::MatrixXcd::Zero(M, M);
      Eigen::MatrixXcd p_numeric = Eigen::MatrixXcd::Zero(M, M);
      for (int i : group) {
        const Eigen::VectorXcd v = gauge.asDiagonal() * closed.lindblad.col(i);
        p_closed += v * v.adjoint();
        // numeric eigenvectors matching this rate
      }
      const double target = closed.rates(group.front());
      for (int i = 0; i < M; ++i) {
        if (std::abs(numeric.rates(i) - target) < 1e-6 * std::max(1.0, target)) {
          p_numeric += numeric.lindblad.col(i) * numeric.lindblad.col(i).adjoint();
        }
      }
      proj_dev = std::max(proj_dev, (p_closed - p_numeric).norm());
    }
    if (max_rate_dev) *max_rate_dev = rate_dev;
    if (max_projector_dev) *max_projector_dev = proj_dev;
  });
}

cascade_status cascade_xi_profile(const cascade_network* net, int kmax, double* xi_out) {
  return guarded([&] {
    require(net && xi_out, "null argument");
    require(net->regular.has_value(), "xi profile needs a regular spec");
    const cascade::XiProfile prof = cascade::xi_profile(*net->regular, kmax);
    for (int k = 0; k < kmax; ++k) {
      xi_out[2 * k] = prof.xi[static_cast<size_t>(k)].real();
      xi_out[2 * k + 1] = prof.xi[static_cast<size_t>(k)].imag();
    }
  });
}

cascade_status cascade_xi_profile_closed(const double* taus, const double* phis, int K,
                                         int kmax, double* xi_out) {
  return guarded([&] {
    require(xi_out && phis && K >= 1, "need at least one phase");
    require(K == 1 || taus != nullptr, "null transmissivity array");
    const cascade::TransferMatrix t = cascade::transfer_matrix(
        std::vector<double>(taus, taus + (K - 1)), std::vector<double>(phis, phis + K));
    const cascade::XiProfile prof = cascade::xi_profile_closed(t, kmax);
    for (int k = 0; k < kmax; ++k) {
      xi_out[2 * k] = prof.xi[static_cast<size_t>(k)].real();
      xi_out[2 * k + 1] = prof.xi[static_cast<size_t>(k)].imag();
    }
  });
}

cascade_status cascade_xi_k2_analytic(double tau1, double phi1, double phi2, int kmax,
                                      double* xi_out, int* used_fallback) {
  return guarded([&] {
    require(xi_out != nullptr, "null output pointer");
    bool fb = false;
    const cascade::XiProfile prof = cascade::xi_k2_analytic(tau1, phi1, phi2, kmax, &fb);
    for (int k = 0; k < kmax; ++k) {
      xi_out[2 * k] = prof.xi[static_cast<size_t>(k)].real();
      xi_out[2 * k + 1] = prof.xi[static_cast<size_t>(k)].imag();
    }
    if (used_fallback) *used_fallback = fb ? 1 : 0;
  });
}

cascade_status cascade_design_pruned(int order, double tau_base, double phi_base, int count,
                                     double* taus_out, double* phis_out, double* retained_out,
                                     double* residual_out) {
  return guarded([&] {
    require(taus_out && phis_out, "null output arrays");
    const cascade::DesignSchedule sched =
        cascade::design_pruned(order, tau_base, phi_base, count);
    for (int k = 0; k < count; ++k) {
      taus_out[k] = sched.taus[static_cast<size_t>(k)];
      phis_out[k] = sched.phis[static_cast<size_t>(k)];
    }
    if (retained_out) *retained_out = sched.retained_modulus;
    if (residual_out) *residual_out = sched.max_pruned_residual;
  });
}

cascade_status cascade_threshold_scan(int k, double grid, int refine, double* threshold_out) {
  return guarded([&] {
    require(threshold_out != nullptr, "null output pointer");
    *threshold_out = cascade::threshold_scan(k, grid, refine != 0);
  });
}

cascade_status cascade_simulate(const cascade_network* net, int local_dim, double t_final,
                                double dt, const int* excited_sites, int n_excited,
                                int stride, int override_cap, cascade_sim** out) {
  return guarded([&] {
    require(net && out, "null argument");
    require(n_excited == 0 || excited_sites != nullptr, "null excited-site array");
    const int M = net->net.sites();
    std::vector<int> occ(static_cast<size_t>(M), 0);
    for (int i = 0; i < n_excited; ++i) {
      const int site = excited_sites[i];
      require(site >= 1 && site <= M,
              "excited site " + std::to_string(site) + " out of range [1," +
                  std::to_string(M) + "]");
      require(occ[static_cast<size_t>(site - 1)] == 0,
              "site " + std::to_string(site) + " listed twice");
      occ[static_cast<size_t>(site - 1)] = 1;
    }
    const cascade::Superoperator gen =
        cascade::cascade_generator(net->net, local_dim, override_cap != 0);
    const cascade::TruncatedState rho0 = cascade::fock_product_state(M, local_dim, occ);
    const cascade::Trajectory traj =
        cascade::evolve(gen, rho0, t_final, dt, stride > 0 ? stride : 1);

    auto sim = std::make_unique<cascade_sim>();
    sim->sites = M;
    sim->times = traj.times;
    sim->convergence_error = traj.convergence_error;
    sim->populations.reserve(traj.states.size() * static_cast<size_t>(M));
    sim->moments.reserve(traj.states.size() * static_cast<size_t>(M));
    for (const cascade::TruncatedState& st : traj.states) {
      for (int m = 1; m <= M; ++m) {
        sim->populations.push_back(cascade::population(st, m));
        sim->moments.push_back(cascade::site_moment(st, m));
      }
    }
    *out = sim.release();
  });
}

void cascade_sim_free(cascade_sim* sim) { delete sim; }

int cascade_sim_samples(const cascade_sim* sim) {
  return sim ? static_cast<int>(sim->times.size()) : 0;
}

int cascade_sim_sites(const cascade_sim* sim) { return sim ? sim->sites : 0; }

double cascade_sim_time(const cascade_sim* sim, int sample) {
  if (!sim || sample < 0 || sample >= static_cast<int>(sim->times.size())) return 0.0;
  return sim->times[static_cast<size_t>(sample)];
}

double cascade_sim_population(const cascade_sim* sim, int sample, int site) {
  if (!sim || sample < 0 || sample >= static_cast<int>(sim->times.size()) || site < 1 ||
      site > sim->sites) {
    return 0.0;
  }
  return sim->populations[static_cast<size_t>(sample) * sim->sites + (site - 1)];
}

cascade_status cascade_sim_moment(const cascade_sim* sim, int sample, int site, double* re,
                                  double* im) {
  return guarded([&] {
    require(sim != nullptr, "null simulation handle");
    require(sample >= 0 && sample < static_cast<int>(sim->times.size()), "sample out of range");
    require(site >= 1 && site <= sim->sites, "site out of range");
    const cxd m = sim->moments[static_cast<size_t>(sample) * sim->sites + (site - 1)];
    if (re) *re = m.real();
    if (im) *im = m.imag();
  });
}

double cascade_sim_convergence_error(const cascade_sim* sim) {
  return sim ? sim->convergence_error : 0.0;
}

}  // extern "C"
