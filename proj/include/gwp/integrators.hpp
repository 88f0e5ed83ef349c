#pragma once

#include "gwp/eom.hpp"
#include "gwp/state.hpp"

namespace gwp {

enum class Integrator { Boris, MRK4, RK4 };

Integrator integrator_from_string(const std::string& name);
std::string integrator_name(Integrator it);

// Staggered data carried between Boris steps. Half-integer velocities sit
// at t_n - tau/2 and t_n - 3 tau/2; positions and phases at t_n and the
// previous integer time.
struct BorisStaggeredState {
  double eps = 1.0;
  double tau = 0.0;
  long n = 0;
  double t_n = 0.0;
  Vec q;
  CMat Q;
  Vec v_half;
  Vec v_half_prev;
  CMat Ups_half;
  CMat Ups_half_prev;
  double zeta_R = 0.0;
  double zeta_R_prev = 0.0;
  double zeta_I = 0.0;
  double zeta_I0 = 0.0;
  double log_det_Q0 = 0.0;
};

// Flattened real parameter vectors (complex blocks split into real and
// imaginary parts, column major): q, v or p, Re Q, Im Q, Re Ups or Re P,
// Im Ups or Im P, zeta_R and, in the canonical layout, zeta_I.
using OdeFunction = std::function<Vec(double, const Vec&)>;

Vec rk4_generic_step(const OdeFunction& f, double t, const Vec& y,
                     double tau);
Vec pack_transformed(const WavePacketState& s);
WavePacketState unpack_transformed(const Vec& y, double t,
                                   const WavePacketState& like,
                                   double log_det_Q_like);
Vec pack_canonical(const CanonicalState& c);
CanonicalState unpack_canonical(const Vec& y, double t,
                                const CanonicalState& like);

// Rotation half of the Boris update, exact for the magnetic force alone.
Vec boris_rotate(const Vec& v_minus, const Vec& B3, double tau);
CMat boris_rotate_columns(const CMat& M, const Vec& B3, double tau);

// Kick-rotate-kick update of one staggered velocity.
Vec boris_velocity_update(const Vec& v_half, const Vec& E, const Vec& B3,
                          double tau);
CMat boris_matrix_update(const CMat& Ups_half, const CMat& SQ, const Vec& B3,
                         double tau);

// Starts the staggered scheme from an exact initial state by integrating
// forward and backward with the norm-preserving RK4 on substeps of tau.
BorisStaggeredState boris_bootstrap(const WavePacketState& s0,
                                    const AverageEngine& engine, double tau,
                                    int substeps = 10);

// Advances the staggered state by one step and returns the synchronized
// packet at the integer time the step pivots on.
WavePacketState boris_full_step(BorisStaggeredState& bs,
                                const AverageEngine& engine);

// Norm-preserving RK4 step in the transformed variables: the imaginary
// phase is slaved to the determinant relation at every stage.
WavePacketState mrk4_step(const WavePacketState& s,
                          const AverageEngine& engine, double tau);

// Classical RK4 step in the canonical variables with the full complex
// phase integrated as an ODE.
CanonicalState rk4_step(const CanonicalState& c, const AverageEngine& engine,
                        double tau);

}  // namespace gwp
