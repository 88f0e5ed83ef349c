#pragma once

#include "gwp/averages.hpp"
#include "gwp/fields.hpp"
#include "gwp/state.hpp"

namespace gwp {

struct TransformedRhs {
  Vec dq;
  Vec dv;
  CMat dQ;
  CMat dUps;
  double dzeta_R = 0.0;
};

struct CanonicalRhs {
  Vec dq;
  Vec dp;
  CMat dQ;
  CMat dP;
  Cplx dzeta;
};

// Magnetic cross product against an embedded 3-vector field; for d = 2 the
// vector w lives in the plane and B points out of it.
Vec cross_B(const Vec& w, const Vec& B3);
CVec cross_B(const CVec& w, const Vec& B3);

// Effective electric force on the packet center, including the
// eps-dependent curvature corrections. Ups is the matrix velocity used
// inside the correction terms (the integrators pass extrapolated values).
Vec field_E(const FieldAverages& fa, const WavePacketState& s,
            const CMat& Ups);

// Effective restoring matrix driving the matrix momentum.
Mat field_S(const FieldAverages& fa, const WavePacketState& s, const Vec& v,
            const CMat& Ups);

// Averaged Hessian of the classical Hamiltonian.
Mat mean_hess_h(const FieldAverages& fa, const WavePacketState& s,
                const Vec& v, const CMat& Ups);

// Right-hand side of the real phase equation.
double zeta_R_rhs(const FieldAverages& fa, const WavePacketState& s,
                  const Vec& v, const CMat& Ups);

TransformedRhs rhs_transformed(const WavePacketState& s,
                               const AverageEngine& engine);
CanonicalRhs rhs_canonical(const CanonicalState& c,
                           const AverageEngine& engine);

// Time derivative of a position observable average, given the averaged
// gradient and Hessian of the observable at the current packet.
double ehrenfest_rhs(const WavePacketState& s, const Vec& mean_grad_w,
                     const Mat& mean_hess_w);

}  // namespace gwp
