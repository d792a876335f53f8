#pragma once

// Shared helpers for the test suites: seeded generators and matrix checks.

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "core/network.hpp"

namespace testutil {

inline cascade::NetworkSpec random_network(std::mt19937_64& rng, int sites, double loss = 0.0,
                                           double gamma = 1.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
  cascade::NetworkSpec net(sites, gamma, loss);
  for (int m = 1; m <= sites; ++m) {
    for (int mp = m + 1; mp <= sites; ++mp) {
      net.set_element(m, mp, cascade::BeamSplitter(unit(rng), angle(rng)));
    }
  }
  return net;
}

inline cascade::RegularSpec random_regular(std::mt19937_64& rng, int sites, double loss = 0.0,
                                           double gamma = 1.0) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
  cascade::RegularSpec spec;
  spec.sites = sites;
  spec.gamma = gamma;
  spec.loss = loss;
  for (int k = 1; k < sites; ++k) {
    spec.taus.push_back(unit(rng));
    spec.phis.push_back(angle(rng));
  }
  return spec;
}

// Even/odd network family: tau_2 = 0, phi_2 = phi_1 + pi/2; higher diagonals
// randomized to confirm they are inert.
inline cascade::RegularSpec evenodd_regular(int sites, double tau1, double phi1,
                                            double gamma = 1.0) {
  cascade::RegularSpec spec;
  spec.sites = sites;
  spec.gamma = gamma;
  spec.taus.assign(static_cast<size_t>(sites - 1), 0.5);
  spec.phis.assign(static_cast<size_t>(sites - 1), 0.3);
  spec.taus[0] = tau1;
  spec.phis[0] = phi1;
  if (sites >= 3) {
    spec.taus[1] = 0.0;
    spec.phis[1] = phi1 + 3.14159265358979323846 / 2.0;
  }
  return spec;
}

inline double unitarity_defect(const Eigen::MatrixXcd& u) {
  return (u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testutil
