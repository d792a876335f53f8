#include "core/network.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cascade {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double reduce_phase(double phi) {
  double r = std::fmod(phi, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

BeamSplitter::BeamSplitter(double t, double phi) : transmissivity(t), phase(reduce_phase(phi)) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ValidationError("beam splitter transmissivity " + std::to_string(t) +
                          " outside [0,1]");
  }
  if (!std::isfinite(phi)) {
    throw ValidationError("beam splitter phase must be finite");
  }
}

Eigen::Matrix2cd bs_unitary(const BeamSplitter& bs) {
  const double r = std::sqrt(bs.transmissivity);
  const double s = std::sqrt(1.0 - bs.transmissivity);
  const std::complex<double> ph = std::polar(1.0, -bs.phase);
  Eigen::Matrix2cd u;
  u(0, 0) = r;
  u(0, 1) = std::complex<double>(0.0, -s);
  u(1, 0) = ph * std::complex<double>(0.0, -s);
  u(1, 1) = ph * r;
  return u;
}

NetworkSpec::NetworkSpec(int sites, double gamma, double loss)
    : sites_(sites), gamma_(gamma), loss_(loss) {
  if (sites < 1) throw ValidationError("site count must be positive, got " + std::to_string(sites));
  if (!(gamma > 0.0)) throw ValidationError("gamma must be positive, got " + std::to_string(gamma));
  if (!(loss >= 0.0 && loss <= 1.0)) {
    throw ValidationError("loss " + std::to_string(loss) + " outside [0,1]");
  }
  upper_.assign(static_cast<size_t>(sites) * (sites - 1) / 2, BeamSplitter{});
}

int NetworkSpec::index_of(int m, int mp) const {
  if (m < 1 || mp <= m || mp > sites_) {
    throw ValidationError("element (" + std::to_string(m) + "," + std::to_string(mp) +
                          "): require 1 <= m < m' <= " + std::to_string(sites_));
  }
  // row-major packing of the strict upper triangle
  const int row_start = (m - 1) * sites_ - (m - 1) * m / 2;
  return row_start + (mp - m - 1);
}

void NetworkSpec::set_element(int m, int mp, const BeamSplitter& bs) {
  upper_[static_cast<size_t>(index_of(m, mp))] = bs;
}

const BeamSplitter& NetworkSpec::element(int m, int mp) const {
  return upper_[static_cast<size_t>(index_of(m, mp))];
}

void validate_regular(const RegularSpec& spec) {
  if (spec.sites < 1) {
    throw ValidationError("site count must be positive, got " + std::to_string(spec.sites));
  }
  if (spec.taus.size() != spec.phis.size()) {
    throw ValidationError("regular spec: taus has " + std::to_string(spec.taus.size()) +
                          " entries but phis has " + std::to_string(spec.phis.size()));
  }
  if (static_cast<int>(spec.taus.size()) != spec.sites - 1) {
    throw ValidationError("regular spec: expected " + std::to_string(spec.sites - 1) +
                          " taus for M=" + std::to_string(spec.sites) + ", got " +
                          std::to_string(spec.taus.size()));
  }
  for (size_t k = 0; k < spec.taus.size(); ++k) {
    if (!(spec.taus[k] >= 0.0 && spec.taus[k] <= 1.0)) {
      throw ValidationError("regular spec: tau_" + std::to_string(k + 1) + " = " +
                            std::to_string(spec.taus[k]) + " outside [0,1]");
    }
  }
  if (!(spec.gamma > 0.0)) {
    throw ValidationError("gamma must be positive, got " + std::to_string(spec.gamma));
  }
  if (!(spec.loss >= 0.0 && spec.loss <= 1.0)) {
    throw ValidationError("loss " + std::to_string(spec.loss) + " outside [0,1]");
  }
}

NetworkSpec expand_regular(const RegularSpec& spec) {
  validate_regular(spec);
  NetworkSpec net(spec.sites, spec.gamma, spec.loss);
  for (int k = 1; k < spec.sites; ++k) {
    const BeamSplitter bs(spec.taus[static_cast<size_t>(k - 1)],
                          spec.phis[static_cast<size_t>(k - 1)]);
    for (int m = 1; m + k <= spec.sites; ++m) {
      net.set_element(m, m + k, bs);
    }
  }
  return net;
}

}  // namespace cascade
