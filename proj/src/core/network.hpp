#pragma once

// Cascade-network description: channels, beam splitters, losses, and the
// elementary two-mode beam-splitter transformation.

#include <Eigen/Dense>
#include <vector>

#include "core/errors.hpp"

namespace cascade {

double reduce_phase(double phi);  // maps any real angle into [0, 2*pi)

struct BeamSplitter {
  double transmissivity = 1.0;
  double phase = 0.0;  // stored reduced modulo 2*pi

  BeamSplitter() = default;
  BeamSplitter(double t, double phi);
};

// Mode map of a single beam splitter in the one-signal sector, acting on the
// amplitude column (b_m, b_m'):
//   row 1:           ( sqrt(t),        -i sqrt(1-t) )
//   row 2: e^{-i phi}( -i sqrt(1-t),   sqrt(t)      )
Eigen::Matrix2cd bs_unitary(const BeamSplitter& bs);

// Full network: one optical element per channel pair (m, m') with m < m'.
// Pairs never assigned keep a fully transmitting element (t=1, phi=0), i.e.
// a plain wire crossing.  Channel indices are 1-based throughout.
class NetworkSpec {
 public:
  NetworkSpec(int sites, double gamma, double loss = 0.0);

  void set_element(int m, int mp, const BeamSplitter& bs);
  const BeamSplitter& element(int m, int mp) const;

  int sites() const { return sites_; }
  double gamma() const { return gamma_; }
  double loss() const { return loss_; }

 private:
  int index_of(int m, int mp) const;

  int sites_;
  double gamma_;
  double loss_;
  std::vector<BeamSplitter> upper_;  // packed strict upper triangle
};

// Translation-invariant network: every element of the k-th diagonal carries
// the same (tau_k, phi_k).
struct RegularSpec {
  int sites = 0;
  std::vector<double> taus;  // tau_1 .. tau_{M-1}
  std::vector<double> phis;  // phi_1 .. phi_{M-1}
  double loss = 0.0;
  double gamma = 1.0;
};

void validate_regular(const RegularSpec& spec);

// Expands the diagonal constraint t_{m,m+k} = tau_k, phi_{m,m+k} = phi_k.
NetworkSpec expand_regular(const RegularSpec& spec);

}  // namespace cascade
