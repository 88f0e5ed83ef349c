#pragma once

#include "gwp/averages.hpp"
#include "gwp/state.hpp"

namespace gwp {

// Mean total energy of the packet under the field model of the engine.
double energy(const WavePacketState& s, const AverageEngine& engine);
double energy(const CanonicalState& c, const AverageEngine& engine);

// Closed-form inner product <a, b> of two Gaussian packets.
Cplx packet_overlap(const CanonicalState& a, const CanonicalState& b);

struct L2Result {
  double distance = 0.0;
  bool saturated = false;
};

// L2 distance between two packets by Gauss-Hermite quadrature on a shared
// mixture Gaussian. The saturated flag marks packets with essentially
// disjoint supports, where the distance degenerates to the norm sum.
L2Result l2_distance(const CanonicalState& a, const CanonicalState& b,
                     int order = 24);
L2Result l2_distance(const WavePacketState& a, const WavePacketState& b,
                     const AverageEngine& engine, int order = 24);

// Per-component deviations between two canonical states, each Frobenius
// norm divided by its entry count.
struct ParameterErrors {
  double q = 0.0;
  double p = 0.0;
  double Q = 0.0;
  double P = 0.0;
  double zeta_R = 0.0;
  double zeta_I = 0.0;

  double max() const;
};

ParameterErrors parameter_errors(const CanonicalState& a,
                                 const CanonicalState& b);

struct Diagnostics {
  double norm = 0.0;
  double energy = 0.0;
  double sympl_r1 = 0.0;
  double sympl_r2 = 0.0;
  double det_Q_abs = 0.0;
};

Diagnostics diagnostics(const WavePacketState& s, const AverageEngine& engine);

}  // namespace gwp
