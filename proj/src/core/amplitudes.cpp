#include "core/amplitudes.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

namespace cascade {

using cxd = std::complex<double>;

Eigen::MatrixXcd level_unitary(const NetworkSpec& net, int level) {
  const int M = net.sites();
  if (level < 1 || level > M - 1) {
    throw ValidationError("level " + std::to_string(level) + " out of range [1," +
                          std::to_string(M - 1) + "]");
  }
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Identity(M, M);
  for (int mp = level + 1; mp <= M; ++mp) {
    const Eigen::Matrix2cd u = bs_unitary(net.element(level, mp));
    // left-multiply by the block embedded at rows/columns (level, mp)
    const Eigen::RowVectorXcd row_a = v.row(level - 1);
    const Eigen::RowVectorXcd row_b = v.row(mp - 1);
    v.row(level - 1) = u(0, 0) * row_a + u(0, 1) * row_b;
    v.row(mp - 1) = u(1, 0) * row_a + u(1, 1) * row_b;
  }
  return v;
}

Eigen::MatrixXcd propagate(const NetworkSpec& net, int from_level, int to_level) {
  const int M = net.sites();
  if (from_level < 1 || to_level < from_level || to_level > M) {
    throw ValidationError("propagate levels (" + std::to_string(from_level) + "," +
                          std::to_string(to_level) + ") violate 1 <= from <= to <= " +
                          std::to_string(M));
  }
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(M, M);
  for (int lvl = from_level; lvl < to_level; ++lvl) {
    p = level_unitary(net, lvl) * p;
  }
  return p;
}

AmplitudeVector input_amplitudes(const NetworkSpec& net, int level) {
  const Eigen::MatrixXcd p = propagate(net, 1, level);
  AmplitudeVector out;
  out.level = level;
  out.entries = std::pow(1.0 - net.loss(), static_cast<double>(level - 1)) *
                p.row(level - 1).transpose();
  return out;
}

CouplingMatrix coupling_matrix(const NetworkSpec& net) {
  const int M = net.sites();
  CouplingMatrix out;
  out.sites = M;
  out.zeta = Eigen::MatrixXcd::Zero(M, M);
  for (int m = 1; m < M; ++m) {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(M, M);
    for (int lvl = m; lvl < M; ++lvl) {
      p = level_unitary(net, lvl) * p;
      const int mp = lvl + 1;
      out.zeta(m - 1, mp - 1) =
          std::pow(1.0 - net.loss(), static_cast<double>(mp - m)) * p(mp - 1, m - 1);
    }
  }
  return out;
}

namespace {

// One optical element as met along a signal's journey; elements of level l
// are encountered in increasing partner order, levels in increasing order.
struct PathElement {
  int a, b;          // coupled channels, a < b
  double t, phi;
};

// Depth-first sum over all paths from channel `m` (entering at level m) to
// channel `mp` at level mp.  At each element touching the current channel the
// signal either transmits or reflects with the factors of the two-mode map.
cxd enumerate_paths(const std::vector<PathElement>& els, size_t idx, int chan, cxd amp, int target) {
  if (idx == els.size()) {
    return chan == target ? amp : cxd(0.0, 0.0);
  }
  const PathElement& e = els[idx];
  if (chan != e.a && chan != e.b) {
    return enumerate_paths(els, idx + 1, chan, amp, target);
  }
  const double r = std::sqrt(e.t);
  const double s = std::sqrt(1.0 - e.t);
  const cxd ph = std::polar(1.0, -e.phi);
  cxd sum(0.0, 0.0);
  if (chan == e.a) {
    sum += enumerate_paths(els, idx + 1, e.a, amp * r, target);
    sum += enumerate_paths(els, idx + 1, e.b, amp * ph * cxd(0.0, -s), target);
  } else {
    sum += enumerate_paths(els, idx + 1, e.b, amp * ph * r, target);
    sum += enumerate_paths(els, idx + 1, e.a, amp * cxd(0.0, -s), target);
  }
  return sum;
}

}  // namespace

CouplingMatrix coupling_matrix_oracle(const NetworkSpec& net) {
  const int M = net.sites();
  if (M > 12) {
    throw ResourceError("path enumeration limited to 12 sites, got " + std::to_string(M));
  }
  CouplingMatrix out;
  out.sites = M;
  out.zeta = Eigen::MatrixXcd::Zero(M, M);
  for (int m = 1; m < M; ++m) {
    for (int mp = m + 1; mp <= M; ++mp) {
      std::vector<PathElement> els;
      for (int lvl = m; lvl < mp; ++lvl) {
        for (int b = lvl + 1; b <= M; ++b) {
          const BeamSplitter& bs = net.element(lvl, b);
          els.push_back({lvl, b, bs.transmissivity, bs.phase});
        }
      }
      const cxd amp = enumerate_paths(els, 0, m, cxd(1.0, 0.0), mp);
      out.zeta(m - 1, mp - 1) =
          std::pow(1.0 - net.loss(), static_cast<double>(mp - m)) * amp;
    }
  }
  return out;
}

}  // namespace cascade
