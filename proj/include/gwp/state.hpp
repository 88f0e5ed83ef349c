#pragma once

#include <random>

#include "gwp/types.hpp"

namespace gwp {

// Variational Gaussian wave packet in the magnetic (kinetic momentum)
// parametrization: center q, kinetic velocity v, Hagedorn factor Q,
// magnetic matrix momentum Ups, complex phase zeta = zeta_R + i zeta_I.
struct WavePacketState {
  double eps = 1.0;
  double t = 0.0;
  Vec q;
  Vec v;
  CMat Q;
  CMat Ups;
  double zeta_R = 0.0;
  double zeta_I = 0.0;

  int dim() const { return static_cast<int>(q.size()); }
};

// Same packet in canonical variables: momentum p, matrix momentum P.
struct CanonicalState {
  double eps = 1.0;
  double t = 0.0;
  Vec q;
  Vec p;
  CMat Q;
  CMat P;
  double zeta_R = 0.0;
  double zeta_I = 0.0;

  int dim() const { return static_cast<int>(q.size()); }
};

struct SymplecticityResidual {
  double r1 = 0.0;  // |Q^T P - P^T Q|_F
  double r2 = 0.0;  // |Q^H P - P^H Q - 2i I|_F
};

void validate_state(const WavePacketState& s);
void validate_state(const CanonicalState& s);

// log |det M| through an LU factorization. Throws SingularWidth when the
// determinant underflows to zero or the factorization is not finite.
double log_abs_det(const CMat& M);

// Width matrix C = P Q^{-1}. Throws SingularWidth when Q is numerically
// singular.
CMat width_from_hagedorn(const CMat& Q, const CMat& P);

SymplecticityResidual symplecticity_residual(const CMat& Q, const CMat& P);

double l2_norm_squared(const WavePacketState& s);
double l2_norm_squared(const CanonicalState& s);

// Adjusts zeta_I so that the packet has unit L2 norm.
[[nodiscard]] WavePacketState normalize_phase(WavePacketState s);
[[nodiscard]] CanonicalState normalize_phase(CanonicalState s);

// Conversions between kinetic and canonical momenta. meanA and meanJA are
// the averaged vector potential and its averaged Jacobian at the packet.
CanonicalState to_canonical(const WavePacketState& s, const Vec& meanA,
                            const Mat& meanJA);
WavePacketState from_canonical(const CanonicalState& c, const Vec& meanA,
                               const Mat& meanJA);

// Pointwise evaluation of the packet.
Cplx evaluate_packet(const CanonicalState& c, const Vec& x);
Cplx evaluate_packet(const WavePacketState& s, const Vec& x, const Vec& meanA,
                     const Mat& meanJA);

// Random normalized packet whose (Q, P) pair satisfies the symplecticity
// relations to machine precision; v = p and Ups = P, so field-specific
// momenta must be repaired by the caller. Used by property suites.
WavePacketState random_symplectic_state(int dim, double eps,
                                        std::mt19937_64& rng);

}  // namespace gwp
