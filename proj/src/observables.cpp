#include "gwp/observables.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>

#include "gwp/eom.hpp"

namespace gwp {

namespace {

double energy_impl(const FieldAverages& fa, double eps, const Vec& p,
                   const CMat& Q, const CMat& P) {
  const CMat C = width_from_hagedorn(Q, P);
  const Mat CR = C.real();
  const Mat CI = C.imag();
  const Mat Sigma = (Q * Q.adjoint()).real();
  const Mat RH = CR * CR + CI * CI - 2.0 * fa.JA.transpose() * CR;
  return 0.5 * (p.dot(p) - 2.0 * p.dot(fa.A) + fa.A2) + fa.phi +
         0.25 * eps * (RH * Sigma).trace();
}

}  // namespace

double energy(const WavePacketState& s, const AverageEngine& engine) {
  const FieldAverages fa = engine.field_averages(s);
  const Vec p = s.v + fa.A;
  const CMat P = s.Ups + fa.JA.cast<Cplx>() * s.Q;
  return energy_impl(fa, s.eps, p, s.Q, P);
}

double energy(const CanonicalState& c, const AverageEngine& engine) {
  WavePacketState view;
  view.eps = c.eps;
  view.t = c.t;
  view.q = c.q;
  view.v = Vec::Zero(c.dim());
  view.Q = c.Q;
  view.Ups = CMat::Zero(c.dim(), c.dim());
  view.zeta_R = c.zeta_R;
  view.zeta_I = c.zeta_I;
  const FieldAverages fa = engine.field_averages(view);
  return energy_impl(fa, c.eps, c.p, c.Q, c.P);
}

Cplx packet_overlap(const CanonicalState& a, const CanonicalState& b) {
  if (a.dim() != b.dim() || a.eps != b.eps)
    throw DimensionError("overlap requires matching dimension and eps");
  const int d = a.dim();
  const double eps = a.eps;

  const CMat Ca = width_from_hagedorn(a.Q, a.P);
  const CMat Cb = width_from_hagedorn(b.Q, b.P);
  const CMat M = Cb - Ca.conjugate();

  const CVec qa = a.q.cast<Cplx>(), qb = b.q.cast<Cplx>();
  const CVec pa = a.p.cast<Cplx>(), pb = b.p.cast<Cplx>();
  const CVec b0 = -(Cb * qb) + Ca.conjugate() * qa + pb - pa;
  const Cplx za(a.zeta_R, a.zeta_I), zb(b.zeta_R, b.zeta_I);
  const Cplx c0 = 0.5 * (qb.transpose() * Cb * qb)(0) -
                  0.5 * (qa.transpose() * Ca.conjugate() * qa)(0) -
                  (qb.transpose() * pb)(0) + (qa.transpose() * pa)(0) + zb -
                  std::conj(za);

  // LDL^T factorization of the accretive matrix -iM gives the principal
  // branch of det(-iM)^{-1/2} pivot by pivot.
  const CMat W = Cplx(0.0, -1.0) * M;
  CMat L = CMat::Identity(d, d);
  CVec D(d);
  for (int j = 0; j < d; ++j) {
    Cplx acc = W(j, j);
    for (int k = 0; k < j; ++k) acc -= L(j, k) * L(j, k) * D(k);
    D(j) = acc;
    for (int i = j + 1; i < d; ++i) {
      Cplx s = W(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k) * D(k);
      L(i, j) = s / D(j);
    }
  }
  Cplx det_root_inv = 1.0;
  for (int j = 0; j < d; ++j) det_root_inv /= std::sqrt(D(j));

  const CVec Minv_b0 = Eigen::PartialPivLU<CMat>(M).solve(b0);
  const Cplx arg = Cplx(0.0, 1.0 / eps) *
                   (c0 - 0.5 * (b0.transpose() * Minv_b0)(0));
  return std::pow(2.0 * M_PI * eps, 0.5 * d) * det_root_inv * std::exp(arg);
}

L2Result l2_distance(const CanonicalState& a, const CanonicalState& b,
                     int order) {
  if (a.dim() != b.dim() || a.eps != b.eps)
    throw DimensionError("distance requires matching dimension and eps");
  const int d = a.dim();
  const double eps = a.eps;

  // Shared sampling Gaussian: mean of the two precision matrices.
  const Mat Sa = (a.Q * a.Q.adjoint()).real();
  const Mat Sb = (b.Q * b.Q.adjoint()).real();
  const Mat Prec = 0.5 * (Sa.inverse() + Sb.inverse());
  const Mat Cov = Prec.inverse();
  Eigen::LLT<Mat> llt(Cov);
  if (llt.info() != Eigen::Success)
    throw SingularWidth("mixture covariance is not positive definite");
  const Mat G = llt.matrixL();
  double detG = 1.0;
  for (int i = 0; i < d; ++i) detG *= G(i, i);

  Vec y1, w1;
  gauss_hermite(order, y1, w1);
  const Vec qbar = 0.5 * (a.q + b.q);
  const double se = std::sqrt(eps);

  long total = 1;
  for (int i = 0; i < d; ++i) total *= order;
  std::vector<int> idx(d, 0);
  double acc = 0.0;
  for (long m = 0; m < total; ++m) {
    Vec y(d);
    double logw = 0.0;
    for (int i = 0; i < d; ++i) {
      y(i) = y1(idx[i]);
      logw += std::log(w1(idx[i])) + y(i) * y(i);
    }
    const Vec x = qbar + se * (G * y);
    const Cplx diff = evaluate_packet(a, x) - evaluate_packet(b, x);
    acc += std::exp(logw) * std::norm(diff);
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < order) break;
      idx[i] = 0;
    }
  }
  const double dist2 = std::pow(eps, 0.5 * d) * detG * acc;

  L2Result out;
  const double na2 = l2_norm_squared(a);
  const double nb2 = l2_norm_squared(b);
  out.saturated = dist2 > 0.98 * (na2 + nb2);
  out.distance = std::sqrt(std::max(0.0, dist2));
  return out;
}

L2Result l2_distance(const WavePacketState& a, const WavePacketState& b,
                     const AverageEngine& engine, int order) {
  const FieldAverages fa = engine.field_averages(a);
  const FieldAverages fb = engine.field_averages(b);
  return l2_distance(to_canonical(a, fa.A, fa.JA), to_canonical(b, fb.A, fb.JA),
                     order);
}

double ParameterErrors::max() const {
  double m = q;
  m = std::max(m, p);
  m = std::max(m, Q);
  m = std::max(m, P);
  m = std::max(m, zeta_R);
  m = std::max(m, zeta_I);
  return m;
}

ParameterErrors parameter_errors(const CanonicalState& a,
                                 const CanonicalState& b) {
  if (a.dim() != b.dim())
    throw DimensionError("parameter errors require matching dimension");
  const double d = static_cast<double>(a.dim());
  ParameterErrors e;
  e.q = (a.q - b.q).norm() / d;
  e.p = (a.p - b.p).norm() / d;
  e.Q = (a.Q - b.Q).norm() / (d * d);
  e.P = (a.P - b.P).norm() / (d * d);
  e.zeta_R = std::abs(a.zeta_R - b.zeta_R);
  e.zeta_I = std::abs(a.zeta_I - b.zeta_I);
  return e;
}

Diagnostics diagnostics(const WavePacketState& s,
                        const AverageEngine& engine) {
  const FieldAverages fa = engine.field_averages(s);
  const CMat P = s.Ups + fa.JA.cast<Cplx>() * s.Q;
  Diagnostics g;
  g.norm = std::sqrt(l2_norm_squared(s));
  g.energy = energy_impl(fa, s.eps, s.v + fa.A, s.Q, P);
  const SymplecticityResidual r = symplecticity_residual(s.Q, P);
  g.sympl_r1 = r.r1;
  g.sympl_r2 = r.r2;
  g.det_Q_abs = std::exp(log_abs_det(s.Q));
  return g;
}

}  // namespace gwp
