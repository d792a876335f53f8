// cascade command-line tool: couplings, gksl, xi, design, sweep, threshold,
// simulate.  All computation goes through the C API; this file only parses
// arguments and formats CSV/JSON.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "cascade/cascade.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

// 17 significant digits: round-trip safe and byte-stable across runs
std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct OutputTarget {
  std::optional<std::ofstream> file;
  std::ostream& stream() { return file ? *file : std::cout; }
  void open(const std::string& path) {
    if (path.empty()) return;
    file.emplace(path);
    if (!*file) throw CLI::RuntimeError("cannot open output file '" + path + "'", 2);
  }
};

[[noreturn]] void die(const std::string& subcommand, cascade_status status) {
  std::cerr << "cascade " << subcommand << ": " << cascade_last_error() << "\n";
  std::exit(static_cast<int>(status));
}

void check(const std::string& subcommand, cascade_status status) {
  if (status != CASCADE_OK) die(subcommand, status);
}

struct NetworkHandle {
  cascade_network* net = nullptr;
  ~NetworkHandle() { cascade_network_free(net); }
};

struct SimHandle {
  cascade_sim* sim = nullptr;
  ~SimHandle() { cascade_sim_free(sim); }
};

NetworkHandle load_network(const std::string& subcommand, const std::string& path) {
  NetworkHandle h;
  check(subcommand, cascade_network_load(path.c_str(), &h.net));
  return h;
}

void emit_complex_matrix_csv(std::ostream& os, const std::vector<double>& buf, int rows,
                             int cols) {
  os << "m";
  for (int c = 1; c <= cols; ++c) os << ",re" << c << ",im" << c;
  os << "\n";
  for (int r = 0; r < rows; ++r) {
    os << (r + 1);
    for (int c = 0; c < cols; ++c) {
      os << "," << fmt17(buf[2 * (static_cast<size_t>(r) * cols + c)]) << ","
         << fmt17(buf[2 * (static_cast<size_t>(r) * cols + c) + 1]);
    }
    os << "\n";
  }
}

void emit_complex_matrix_json(std::ostream& os, const std::vector<double>& buf, int rows,
                              int cols) {
  os << "[";
  for (int r = 0; r < rows; ++r) {
    os << (r ? "," : "") << "\n    [";
    for (int c = 0; c < cols; ++c) {
      const size_t i = 2 * (static_cast<size_t>(r) * cols + c);
      os << (c ? "," : "") << "[" << fmt17(buf[i]) << "," << fmt17(buf[i + 1]) << "]";
    }
    os << "]";
  }
  os << "\n  ]";
}

// ---- couplings ----------------------------------------------------------

int run_couplings(const std::string& input, bool oracle, bool check_both,
                  const std::string& format, const std::string& output) {
  NetworkHandle h = load_network("couplings", input);
  const int M = cascade_network_sites(h.net);
  std::vector<double> zeta(2 * static_cast<size_t>(M) * M);

  if (check_both) {
    std::vector<double> zeta_oracle(zeta.size());
    check("couplings", cascade_coupling_matrix(h.net, zeta.data()));
    check("couplings", cascade_coupling_matrix_oracle(h.net, zeta_oracle.data()));
    double max_dev = 0.0;
    for (size_t i = 0; i < zeta.size(); i += 2) {
      const double dre = zeta[i] - zeta_oracle[i];
      const double dim = zeta[i + 1] - zeta_oracle[i + 1];
      max_dev = std::max(max_dev, std::hypot(dre, dim));
    }
    OutputTarget out;
    out.open(output);
    out.stream() << "max elementwise discrepancy: " << fmt17(max_dev) << "\n";
    return 0;
  }

  check("couplings", oracle ? cascade_coupling_matrix_oracle(h.net, zeta.data())
                            : cascade_coupling_matrix(h.net, zeta.data()));
  OutputTarget out;
  out.open(output);
  if (format == "json") {
    out.stream() << "{\n  \"M\": " << M << ",\n  \"zeta\": ";
    emit_complex_matrix_json(out.stream(), zeta, M, M);
    out.stream() << "\n}\n";
  } else {
    emit_complex_matrix_csv(out.stream(), zeta, M, M);
  }
  return 0;
}

// ---- gksl ---------------------------------------------------------------

int run_gksl(const std::string& input, const std::string& closed_form,
             const std::string& output) {
  NetworkHandle h = load_network("gksl", input);
  const int M = cascade_network_sites(h.net);

  if (!closed_form.empty()) {
    double rate_dev = 0.0, proj_dev = 0.0;
    check("gksl", cascade_gksl_evenodd_compare(h.net, &rate_dev, &proj_dev));
    OutputTarget out;
    out.open(output);
    out.stream() << "max rate deviation: " << fmt17(rate_dev) << "\n"
                 << "max projector deviation: " << fmt17(proj_dev) << "\n";
    return 0;
  }

  std::vector<double> rates(static_cast<size_t>(M));
  std::vector<double> lindblad(2 * static_cast<size_t>(M) * M);
  std::vector<double> heff(2 * static_cast<size_t>(M) * M);
  check("gksl", cascade_gksl_decompose(h.net, rates.data(), lindblad.data(), heff.data()));

  OutputTarget out;
  out.open(output);
  std::ostream& os = out.stream();
  os << "{\n  \"rates\": [";
  for (int i = 0; i < M; ++i) os << (i ? "," : "") << fmt17(rates[static_cast<size_t>(i)]);
  os << "],\n  \"lindblad\": ";
  emit_complex_matrix_json(os, lindblad, M, M);
  os << ",\n  \"heff\": ";
  emit_complex_matrix_json(os, heff, M, M);
  os << "\n}\n";
  return 0;
}

// ---- xi ------------------------------------------------------------------

int run_xi(const std::string& input, int kmax, const std::string& output) {
  NetworkHandle h = load_network("xi", input);
  if (kmax <= 0) kmax = cascade_network_sites(h.net) - 1;
  std::vector<double> xi(2 * static_cast<size_t>(kmax));
  check("xi", cascade_xi_profile(h.net, kmax, xi.data()));
  OutputTarget out;
  out.open(output);
  out.stream() << "k,re_xi,im_xi,abs_xi\n";
  for (int k = 0; k < kmax; ++k) {
    const double re = xi[2 * static_cast<size_t>(k)];
    const double im = xi[2 * static_cast<size_t>(k) + 1];
    out.stream() << (k + 1) << "," << fmt17(re) << "," << fmt17(im) << ","
                 << fmt17(std::hypot(re, im)) << "\n";
  }
  return 0;
}

// ---- design ----------------------------------------------------------------

int run_design(int order, double tau, double phi, int count, double gamma, double loss,
               const std::string& output, bool quiet) {
  std::vector<double> taus(static_cast<size_t>(count));
  std::vector<double> phis(static_cast<size_t>(count));
  double retained = 0.0, residual = 0.0;
  check("design", cascade_design_pruned(order, tau, phi, count, taus.data(), phis.data(),
                                        &retained, &residual));
  NetworkHandle h;
  check("design", cascade_network_regular(count + 1, taus.data(), phis.data(), count, loss,
                                          gamma, &h.net));
  char* json = nullptr;
  check("design", cascade_network_to_json(h.net, &json));
  if (output.empty()) {
    std::cout << json;
  } else {
    std::ofstream f(output);
    if (!f) {
      cascade_string_free(json);
      std::cerr << "cascade design: cannot open output file '" << output << "'\n";
      return 2;
    }
    f << json;
  }
  cascade_string_free(json);
  if (!quiet) {
    std::ostream& rep = output.empty() ? std::cerr : std::cout;
    rep << "retained |xi_" << order << "| = " << fmt17(retained) << "\n"
        << "max pruned residual = " << fmt17(residual) << "\n";
  }
  return 0;
}

// ---- sweep -----------------------------------------------------------------

int run_sweep(double phi1, int tau1_steps, int phi2_steps, int kmax, int threads,
              const std::string& output) {
  if (tau1_steps < 2 || phi2_steps < 2) {
    std::cerr << "cascade sweep: need at least 2 steps per axis\n";
    return 2;
  }
  const size_t rows = static_cast<size_t>(tau1_steps) * phi2_steps;
  std::vector<double> abs_xi(rows * static_cast<size_t>(kmax));
  std::vector<cascade_status> stat(static_cast<size_t>(tau1_steps), CASCADE_OK);

  if (threads < 1) threads = 1;
  auto worker = [&](int i0, int step) {
    std::vector<double> xi(2 * static_cast<size_t>(kmax));
    for (int i = i0; i < tau1_steps; i += step) {
      const double tau1 = static_cast<double>(i) / (tau1_steps - 1);
      for (int j = 0; j < phi2_steps; ++j) {
        const double phi2 = 2.0 * kPi * static_cast<double>(j) / (phi2_steps - 1);
        const double taus[1] = {tau1};
        const double phis[2] = {phi1, phi2};
        const cascade_status s = cascade_xi_profile_closed(taus, phis, 2, kmax, xi.data());
        if (s != CASCADE_OK) {
          stat[static_cast<size_t>(i)] = s;
          return;
        }
        for (int k = 0; k < kmax; ++k) {
          abs_xi[(static_cast<size_t>(i) * phi2_steps + j) * kmax + k] =
              std::hypot(xi[2 * static_cast<size_t>(k)], xi[2 * static_cast<size_t>(k) + 1]);
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker, t, threads);
  worker(0, threads);
  for (auto& t : pool) t.join();
  for (cascade_status s : stat) {
    if (s != CASCADE_OK) die("sweep", s);
  }

  OutputTarget out;
  out.open(output);
  std::ostream& os = out.stream();
  os << "tau1,phi2,k,abs_xi\n";
  for (int i = 0; i < tau1_steps; ++i) {
    const double tau1 = static_cast<double>(i) / (tau1_steps - 1);
    for (int j = 0; j < phi2_steps; ++j) {
      const double phi2 = 2.0 * kPi * static_cast<double>(j) / (phi2_steps - 1);
      for (int k = 0; k < kmax; ++k) {
        os << fmt17(tau1) << "," << fmt17(phi2) << "," << (k + 1) << ","
           << fmt17(abs_xi[(static_cast<size_t>(i) * phi2_steps + j) * kmax + k]) << "\n";
      }
    }
  }
  return 0;
}

// ---- threshold -------------------------------------------------------------

int run_threshold(int kmax, double grid, bool refine, const std::string& output) {
  OutputTarget out;
  out.open(output);
  out.stream() << "k,threshold\n";
  for (int k = 2; k <= kmax; ++k) {
    double threshold = 0.0;
    check("threshold", cascade_threshold_scan(k, grid, refine ? 1 : 0, &threshold));
    out.stream() << k << "," << fmt17(threshold) << "\n";
  }
  return 0;
}

// ---- simulate ---------------------------------------------------------------

int run_simulate(const std::string& input, int d, double t_final, double dt,
                 const std::vector<int>& init, const std::string& observables, int stride,
                 bool force_dimension, const std::string& output, bool quiet) {
  NetworkHandle h = load_network("simulate", input);
  if (force_dimension && !quiet) {
    std::cerr << "cascade simulate: dimension cap overridden; large truncations may "
                 "exhaust memory\n";
  }
  SimHandle sim;
  check("simulate",
        cascade_simulate(h.net, d, t_final, dt, init.data(), static_cast<int>(init.size()),
                         stride, force_dimension ? 1 : 0, &sim.sim));
  const int M = cascade_sim_sites(sim.sim);
  const int samples = cascade_sim_samples(sim.sim);
  const bool moments = observables == "moments";

  OutputTarget out;
  out.open(output);
  std::ostream& os = out.stream();
  os << "t";
  for (int m = 1; m <= M; ++m) os << ",n_" << m;
  if (moments) {
    for (int m = 1; m <= M; ++m) os << ",re_a_" << m << ",im_a_" << m;
  }
  os << "\n";
  for (int s = 0; s < samples; ++s) {
    os << fmt17(cascade_sim_time(sim.sim, s));
    for (int m = 1; m <= M; ++m) os << "," << fmt17(cascade_sim_population(sim.sim, s, m));
    if (moments) {
      for (int m = 1; m <= M; ++m) {
        double re = 0.0, im = 0.0;
        check("simulate", cascade_sim_moment(sim.sim, s, m, &re, &im));
        os << "," << fmt17(re) << "," << fmt17(im);
      }
    }
    os << "\n";
  }
  if (!quiet) {
    std::cerr << "step-halving convergence estimate: "
              << fmt17(cascade_sim_convergence_error(sim.sim)) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cascade interferometric-network simulator"};
  app.require_subcommand(1);

  std::string input, output, format = "csv", closed_form, observables = "populations";
  bool oracle = false, check_both = false, quiet = false, degrees = false;
  bool refine = false, force_dimension = false;
  int kmax = 0, order = 1, count = 10, tau1_steps = 101, phi2_steps = 101;
  int local_dim = 2, stride = 1, threads = static_cast<int>(std::thread::hardware_concurrency());
  double tau = 0.75, phi = 0.0, gamma = 1.0, loss = 0.0, grid = 1e-4;
  double phi1 = 0.0, t_final = 1.0, dt = 1e-3;
  std::vector<int> init;

  auto* c_coup = app.add_subcommand("couplings", "coupling constants zeta of a network");
  c_coup->add_option("input", input, "network-spec file")->required();
  c_coup->add_flag("--oracle", oracle, "use brute-force path enumeration");
  c_coup->add_flag("--check", check_both, "run both methods, report max discrepancy");
  c_coup->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  c_coup->add_option("--output,-o", output, "write to file instead of stdout");
  c_coup->add_flag("--quiet,-q", quiet);

  auto* c_gksl = app.add_subcommand("gksl", "rates, jump operators, effective Hamiltonian");
  c_gksl->add_option("input", input)->required();
  c_gksl->add_option("--closed-form", closed_form, "compare against analytic form")
      ->check(CLI::IsMember({"evenodd"}));
  c_gksl->add_option("--output,-o", output);
  c_gksl->add_flag("--quiet,-q", quiet);

  auto* c_xi = app.add_subcommand("xi", "translation-invariant couplings xi_k");
  c_xi->add_option("input", input)->required();
  c_xi->add_option("--kmax", kmax, "orders to emit (default M-1)");
  c_xi->add_option("--output,-o", output);
  c_xi->add_flag("--quiet,-q", quiet);

  auto* c_design = app.add_subcommand("design", "schedule retaining one interaction order");
  c_design->add_option("--order", order, "retained neighbor order")->check(CLI::PositiveNumber);
  c_design->add_option("--tau", tau, "retained-order transmissivity")->required();
  c_design->add_option("--phi", phi, "retained-order phase");
  c_design->add_option("--count", count, "schedule length")->check(CLI::PositiveNumber);
  c_design->add_option("--gamma", gamma, "rate stamped into the emitted spec");
  c_design->add_option("--loss", loss, "loss stamped into the emitted spec");
  c_design->add_option("--output,-o", output, "spec file to write");
  c_design->add_flag("--quiet,-q", quiet);
  c_design->add_flag("--degrees", degrees, "angles given in degrees");

  auto* c_sweep = app.add_subcommand("sweep", "|xi_k| over (tau1, phi2) for the K=2 network");
  c_sweep->add_option("--phi1", phi1, "fixed first-diagonal phase");
  c_sweep->add_option("--tau1-steps", tau1_steps)->check(CLI::Range(2, 100000));
  c_sweep->add_option("--phi2-steps", phi2_steps)->check(CLI::Range(2, 100000));
  c_sweep->add_option("--kmax", kmax, "orders per grid point (default 4)");
  c_sweep->add_option("--threads", threads);
  c_sweep->add_option("--output,-o", output);
  c_sweep->add_flag("--quiet,-q", quiet);
  c_sweep->add_flag("--degrees", degrees);

  auto* c_thresh = app.add_subcommand("threshold", "pruning feasibility threshold per order");
  c_thresh->add_option("--kmax", kmax, "largest order (default 10)");
  c_thresh->add_option("--grid", grid)->check(CLI::PositiveNumber);
  c_thresh->add_flag("--refine", refine, "bisect to 1e-8");
  c_thresh->add_option("--output,-o", output);
  c_thresh->add_flag("--quiet,-q", quiet);

  auto* c_sim = app.add_subcommand("simulate", "integrate the master equation");
  c_sim->add_option("input", input)->required();
  c_sim->add_option("--d", local_dim, "local Fock truncation")->check(CLI::Range(2, 64));
  c_sim->add_option("--t-final", t_final)->required();
  c_sim->add_option("--dt", dt);
  c_sim->add_option("--init", init, "sites prepared with one excitation");
  c_sim->add_option("--observables", observables)
      ->check(CLI::IsMember({"populations", "moments"}));
  c_sim->add_option("--stride", stride, "emit every N-th step")->check(CLI::PositiveNumber);
  c_sim->add_flag("--force-dimension", force_dimension, "override the d^(2M) cap");
  c_sim->add_option("--output,-o", output);
  c_sim->add_flag("--quiet,-q", quiet);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (degrees) {
    phi *= kPi / 180.0;
    phi1 *= kPi / 180.0;
  }

  try {
    if (c_coup->parsed()) return run_couplings(input, oracle, check_both, format, output);
    if (c_gksl->parsed()) return run_gksl(input, closed_form, output);
    if (c_xi->parsed()) return run_xi(input, kmax, output);
    if (c_design->parsed()) return run_design(order, tau, phi, count, gamma, loss, output, quiet);
    if (c_sweep->parsed()) {
      return run_sweep(phi1, tau1_steps, phi2_steps, kmax > 0 ? kmax : 4, threads, output);
    }
    if (c_thresh->parsed()) return run_threshold(kmax > 0 ? kmax : 10, grid, refine, output);
    if (c_sim->parsed()) {
      return run_simulate(input, local_dim, t_final, dt, init, observables, stride,
                          force_dimension, output, quiet);
    }
  } catch (const CLI::RuntimeError& e) {
    std::cerr << "cascade: " << e.what() << "\n";
    return e.get_exit_code();
  }
  return 2;
}
