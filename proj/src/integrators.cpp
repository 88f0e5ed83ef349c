#include "gwp/integrators.hpp"

#include <cmath>

namespace gwp {

Integrator integrator_from_string(const std::string& name) {
  if (name == "boris") return Integrator::Boris;
  if (name == "mrk4") return Integrator::MRK4;
  if (name == "rk4") return Integrator::RK4;
  throw ValidationError("unknown integrator: " + name);
}

std::string integrator_name(Integrator it) {
  switch (it) {
    case Integrator::Boris:
      return "boris";
    case Integrator::MRK4:
      return "mrk4";
    case Integrator::RK4:
      return "rk4";
  }
  return "unknown";
}

namespace {

Eigen::Vector3d embed3(const Vec& w) {
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  for (int i = 0; i < w.size() && i < 3; ++i) u(i) = w(i);
  return u;
}

void check_finite(const WavePacketState& s) {
  if (!s.q.allFinite() || !s.v.allFinite() || !s.Q.allFinite() ||
      !s.Ups.allFinite() || !std::isfinite(s.zeta_R) ||
      !std::isfinite(s.zeta_I))
    throw NonFiniteState("integrator produced a non-finite state");
}

void check_finite(const CanonicalState& s) {
  if (!s.q.allFinite() || !s.p.allFinite() || !s.Q.allFinite() ||
      !s.P.allFinite() || !std::isfinite(s.zeta_R) ||
      !std::isfinite(s.zeta_I))
    throw NonFiniteState("integrator produced a non-finite state");
}

// Flattened parameter vectors: q, v or p, Re Q, Im Q, Re Ups or Re P,
// Im Ups or Im P, zeta_R and, for the canonical system, zeta_I. Matrix
// blocks are stored column major.
void put_matrix(Vec& y, int& at, const CMat& M) {
  const int d = static_cast<int>(M.rows());
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) y(at++) = M(i, j).real();
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) y(at++) = M(i, j).imag();
}

CMat get_matrix(const Vec& y, int& at, int d) {
  CMat M(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) M(i, j) = y(at++);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) M(i, j) += Cplx(0.0, y(at++));
  return M;
}

}  // namespace

Vec rk4_generic_step(const OdeFunction& f, double t, const Vec& y,
                     double tau) {
  const Vec k1 = f(t, y);
  const Vec k2 = f(t + 0.5 * tau, Vec(y + 0.5 * tau * k1));
  const Vec k3 = f(t + 0.5 * tau, Vec(y + 0.5 * tau * k2));
  const Vec k4 = f(t + tau, Vec(y + tau * k3));
  return y + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec pack_transformed(const WavePacketState& s) {
  const int d = s.dim();
  Vec y(2 * d + 4 * d * d + 1);
  int at = 0;
  for (int i = 0; i < d; ++i) y(at++) = s.q(i);
  for (int i = 0; i < d; ++i) y(at++) = s.v(i);
  put_matrix(y, at, s.Q);
  put_matrix(y, at, s.Ups);
  y(at++) = s.zeta_R;
  return y;
}

WavePacketState unpack_transformed(const Vec& y, double t,
                                   const WavePacketState& like,
                                   double log_det_Q_like) {
  const int d = like.dim();
  WavePacketState s;
  s.eps = like.eps;
  s.t = t;
  s.q = Vec(d);
  s.v = Vec(d);
  int at = 0;
  for (int i = 0; i < d; ++i) s.q(i) = y(at++);
  for (int i = 0; i < d; ++i) s.v(i) = y(at++);
  s.Q = get_matrix(y, at, d);
  s.Ups = get_matrix(y, at, d);
  s.zeta_R = y(at++);
  // The imaginary phase is slaved to the determinant relation.
  s.zeta_I =
      like.zeta_I + 0.5 * like.eps * (log_abs_det(s.Q) - log_det_Q_like);
  return s;
}

Vec pack_canonical(const CanonicalState& c) {
  const int d = c.dim();
  Vec y(2 * d + 4 * d * d + 2);
  int at = 0;
  for (int i = 0; i < d; ++i) y(at++) = c.q(i);
  for (int i = 0; i < d; ++i) y(at++) = c.p(i);
  put_matrix(y, at, c.Q);
  put_matrix(y, at, c.P);
  y(at++) = c.zeta_R;
  y(at++) = c.zeta_I;
  return y;
}

CanonicalState unpack_canonical(const Vec& y, double t,
                                const CanonicalState& like) {
  const int d = like.dim();
  CanonicalState c;
  c.eps = like.eps;
  c.t = t;
  c.q = Vec(d);
  c.p = Vec(d);
  int at = 0;
  for (int i = 0; i < d; ++i) c.q(i) = y(at++);
  for (int i = 0; i < d; ++i) c.p(i) = y(at++);
  c.Q = get_matrix(y, at, d);
  c.P = get_matrix(y, at, d);
  c.zeta_R = y(at++);
  c.zeta_I = y(at++);
  return c;
}

WavePacketState mrk4_step(const WavePacketState& s,
                          const AverageEngine& engine, double tau) {
  const int d = s.dim();
  const double ld0 = log_abs_det(s.Q);
  const OdeFunction f = [&](double t, const Vec& y) {
    const WavePacketState st = unpack_transformed(y, t, s, ld0);
    const TransformedRhs r = rhs_transformed(st, engine);
    Vec dy(y.size());
    int at = 0;
    for (int i = 0; i < d; ++i) dy(at++) = r.dq(i);
    for (int i = 0; i < d; ++i) dy(at++) = r.dv(i);
    put_matrix(dy, at, r.dQ);
    put_matrix(dy, at, r.dUps);
    dy(at++) = r.dzeta_R;
    return dy;
  };
  const Vec y1 = rk4_generic_step(f, s.t, pack_transformed(s), tau);
  WavePacketState out = unpack_transformed(y1, s.t + tau, s, ld0);
  check_finite(out);
  return out;
}

CanonicalState rk4_step(const CanonicalState& c, const AverageEngine& engine,
                        double tau) {
  const int d = c.dim();
  const OdeFunction f = [&](double t, const Vec& y) {
    const CanonicalState st = unpack_canonical(y, t, c);
    const CanonicalRhs r = rhs_canonical(st, engine);
    Vec dy(y.size());
    int at = 0;
    for (int i = 0; i < d; ++i) dy(at++) = r.dq(i);
    for (int i = 0; i < d; ++i) dy(at++) = r.dp(i);
    put_matrix(dy, at, r.dQ);
    put_matrix(dy, at, r.dP);
    dy(at++) = r.dzeta.real();
    dy(at++) = r.dzeta.imag();
    return dy;
  };
  const Vec y1 = rk4_generic_step(f, c.t, pack_canonical(c), tau);
  CanonicalState out = unpack_canonical(y1, c.t + tau, c);
  check_finite(out);
  return out;
}

Vec boris_rotate(const Vec& v_minus, const Vec& B3, double tau) {
  const int d = static_cast<int>(v_minus.size());
  const Eigen::Vector3d h = 0.5 * tau * embed3(B3);
  const Eigen::Vector3d s = tau * embed3(B3) / (1.0 + h.squaredNorm());
  const Eigen::Vector3d v = embed3(v_minus);
  const Eigen::Vector3d vp = v + (v + v.cross(h)).cross(s);
  Vec out(d);
  for (int i = 0; i < d; ++i) out(i) = vp(i);
  return out;
}

CMat boris_rotate_columns(const CMat& M, const Vec& B3, double tau) {
  const int d = static_cast<int>(M.rows());
  CMat out(d, M.cols());
  for (int j = 0; j < M.cols(); ++j) {
    Vec re(d), im(d);
    for (int i = 0; i < d; ++i) {
      re(i) = M(i, j).real();
      im(i) = M(i, j).imag();
    }
    const Vec rre = boris_rotate(re, B3, tau);
    const Vec rim = boris_rotate(im, B3, tau);
    for (int i = 0; i < d; ++i) out(i, j) = Cplx(rre(i), rim(i));
  }
  return out;
}

Vec boris_velocity_update(const Vec& v_half, const Vec& E, const Vec& B3,
                          double tau) {
  const Vec v_minus = v_half + 0.5 * tau * E;
  const Vec v_plus = boris_rotate(v_minus, B3, tau);
  return v_plus + 0.5 * tau * E;
}

CMat boris_matrix_update(const CMat& Ups_half, const CMat& SQ, const Vec& B3,
                         double tau) {
  const CMat U_minus = Ups_half + Cplx(0.5 * tau, 0.0) * SQ;
  const CMat U_plus = boris_rotate_columns(U_minus, B3, tau);
  return U_plus + Cplx(0.5 * tau, 0.0) * SQ;
}

BorisStaggeredState boris_bootstrap(const WavePacketState& s0,
                                    const AverageEngine& engine, double tau,
                                    int substeps) {
  if (substeps < 2 || substeps % 2 != 0)
    throw ValidationError("bootstrap substep count must be even");
  const double h = tau / substeps;

  WavePacketState fwd = s0;
  for (int i = 0; i < substeps / 2; ++i) fwd = mrk4_step(fwd, engine, h);
  const Vec v_half = fwd.v;
  const CMat Ups_half = fwd.Ups;

  WavePacketState full = fwd;
  for (int i = 0; i < substeps / 2; ++i) full = mrk4_step(full, engine, h);

  WavePacketState bwd = s0;
  for (int i = 0; i < substeps / 2; ++i) bwd = mrk4_step(bwd, engine, -h);

  BorisStaggeredState bs;
  bs.eps = s0.eps;
  bs.tau = tau;
  bs.n = 1;
  bs.t_n = s0.t + tau;
  bs.q = s0.q + tau * v_half;
  bs.Q = s0.Q + Cplx(tau, 0.0) * Ups_half;
  bs.v_half = v_half;
  bs.v_half_prev = bwd.v;
  bs.Ups_half = Ups_half;
  bs.Ups_half_prev = bwd.Ups;
  bs.zeta_R = full.zeta_R;
  bs.zeta_R_prev = s0.zeta_R;
  bs.zeta_I0 = s0.zeta_I;
  bs.log_det_Q0 = log_abs_det(s0.Q);
  bs.zeta_I = s0.zeta_I + 0.5 * s0.eps * (log_abs_det(bs.Q) - bs.log_det_Q0);
  return bs;
}

WavePacketState boris_full_step(BorisStaggeredState& bs,
                                const AverageEngine& engine) {
  const double tau = bs.tau;

  // One field evaluation per step, at the integer-time packet.
  WavePacketState view;
  view.eps = bs.eps;
  view.t = bs.t_n;
  view.q = bs.q;
  view.v = bs.v_half;
  view.Q = bs.Q;
  view.Ups = bs.Ups_half;
  view.zeta_R = bs.zeta_R;
  view.zeta_I = bs.zeta_I;
  const FieldAverages fa = engine.field_averages(view);

  // Second order extrapolation of the staggered velocities to t_n.
  const Vec v_tilde = 1.5 * bs.v_half - 0.5 * bs.v_half_prev;
  const CMat Ups_tilde =
      Cplx(1.5, 0.0) * bs.Ups_half - Cplx(0.5, 0.0) * bs.Ups_half_prev;

  const Vec E = field_E(fa, view, Ups_tilde);
  const Mat S = field_S(fa, view, v_tilde, Ups_tilde);
  const CMat SQ = S.cast<Cplx>() * bs.Q;

  const Vec v_new = boris_velocity_update(bs.v_half, E, fa.B, tau);
  const CMat Ups_new = boris_matrix_update(bs.Ups_half, SQ, fa.B, tau);

  const Vec q_new = bs.q + tau * v_new;
  const CMat Q_new = bs.Q + Cplx(tau, 0.0) * Ups_new;

  // Time averages centered at t_n feed the phase update and the record.
  const Vec v_avg = 0.5 * (bs.v_half + v_new);
  const CMat Ups_avg = Cplx(0.5, 0.0) * (bs.Ups_half + Ups_new);

  const double dzR = zeta_R_rhs(fa, view, v_avg, Ups_avg);
  const double zeta_R_next = bs.zeta_R_prev + 2.0 * tau * dzR;

  WavePacketState record;
  record.eps = bs.eps;
  record.t = bs.t_n;
  record.q = bs.q;
  record.v = v_avg;
  record.Q = bs.Q;
  record.Ups = Ups_avg;
  record.zeta_R = bs.zeta_R;
  record.zeta_I = bs.zeta_I;
  check_finite(record);

  bs.n += 1;
  bs.t_n += tau;
  bs.q = q_new;
  bs.Q = Q_new;
  bs.v_half_prev = bs.v_half;
  bs.v_half = v_new;
  bs.Ups_half_prev = bs.Ups_half;
  bs.Ups_half = Ups_new;
  bs.zeta_R_prev = bs.zeta_R;
  bs.zeta_R = zeta_R_next;
  bs.zeta_I =
      bs.zeta_I0 + 0.5 * bs.eps * (log_abs_det(Q_new) - bs.log_det_Q0);
  return record;
}

}  // namespace gwp
