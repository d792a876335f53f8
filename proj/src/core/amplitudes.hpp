#pragma once

// Propagation amplitudes and coupling constants of the cascade network.
//
// All products are evaluated in the one-signal sector, where every network
// transformation is an MxM complex matrix acting on channel amplitudes; this
// is exact for the linear-optical elements involved.

#include <Eigen/Dense>

#include "core/network.hpp"

namespace cascade {

// Amplitudes A^{(k)} for a signal injected in channel 1 at the network input
// to occupy channel k when it reaches level `level`.  With loss nu the vector
// carries the factor (1-nu)^(level-1); its norm is 1 for nu = 0.
struct AmplitudeVector {
  int level = 1;
  Eigen::VectorXcd entries;
};

// Strictly upper-triangular matrix of coupling constants zeta_{m,m'}.
struct CouplingMatrix {
  int sites = 0;
  Eigen::MatrixXcd zeta;
};

// One level of the network: the ordered product of the beam-splitter blocks
// coupling channel `level` with every later channel, applied in increasing
// partner order.  Unitary.
Eigen::MatrixXcd level_unitary(const NetworkSpec& net, int level);

// Ordered product of level unitaries from `from_level` up to `to_level`-1;
// the identity when the two coincide.  Entry (m', m) holds the amplitude for
// a signal injected in channel m at level m1 to occupy channel m' at level m2.
Eigen::MatrixXcd propagate(const NetworkSpec& net, int from_level, int to_level);

AmplitudeVector input_amplitudes(const NetworkSpec& net, int level);

// zeta_{m,m'} = (1-nu)^(m'-m) * A^{(m)}_{m'<-m}, via the matrix-product method.
CouplingMatrix coupling_matrix(const NetworkSpec& net);

// Same contract, computed by explicit enumeration of every directed path
// through the network lattice, coherently summing per-element transmission
// and reflection factors.  Deliberately shares no code with the matrix
// method; serves as its independent oracle.  Refuses sites > 12.
CouplingMatrix coupling_matrix_oracle(const NetworkSpec& net);

}  // namespace cascade
