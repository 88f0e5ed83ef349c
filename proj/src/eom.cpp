#include "gwp/eom.hpp"

#include <cmath>
#include <sstream>

namespace gwp {

namespace {

bool has_curvature(const FieldAverages& fa) {
  for (const Mat& h : fa.hessA)
    if (h.norm() > 0.0) return true;
  for (const Tensor3& t : fa.d3A)
    if (t.frobenius_norm() > 0.0) return true;
  return false;
}

struct EpsContext {
  CMat R;    // Ups Q^H - i I
  CMat QQh;  // Q Q^H
  double defect = 0.0;
};

EpsContext make_context(const CMat& Q, const CMat& Ups) {
  const int d = static_cast<int>(Q.rows());
  EpsContext c;
  c.QQh = Q * Q.adjoint();
  c.R = Ups * Q.adjoint() - Cplx(0.0, 1.0) * CMat::Identity(d, d);
  c.defect = c.R.imag().norm() + c.QQh.imag().norm();
  return c;
}

void guard_imag(const char* what, double im_norm, double re_norm, double coef,
                double defect, double tol) {
  const double allowance = tol * (1.0 + re_norm) + 2.0 * defect * coef;
  if (im_norm > allowance) {
    std::ostringstream msg;
    msg << what << ": imaginary residual " << im_norm << " exceeds allowance "
        << allowance;
    throw ImaginaryResidual(msg.str());
  }
}

// M_k(m, l) = <d_k d_m A_l>
Mat tensor_Mk(const FieldAverages& fa, int k) {
  const int d = static_cast<int>(fa.A.size());
  Mat M(d, d);
  for (int m = 0; m < d; ++m)
    for (int l = 0; l < d; ++l) M(m, l) = fa.hessA[l](k, m);
  return M;
}

// F_{kl}(m, n) = <d_k d_l d_m A_n>
Mat tensor_F(const FieldAverages& fa, int k, int l) {
  const int d = static_cast<int>(fa.A.size());
  Mat F(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) F(m, n) = fa.d3A[n](k, l, m);
  return F;
}

// H_{kl}(m, n) = <d_m d_n d_l A_k>
Mat tensor_H(const FieldAverages& fa, int k, int l) {
  const int d = static_cast<int>(fa.A.size());
  Mat H(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) H(m, n) = fa.d3A[k](m, n, l);
  return H;
}

}  // namespace

Vec cross_B(const Vec& w, const Vec& B3) {
  const int d = static_cast<int>(w.size());
  Vec out(d);
  if (d == 2) {
    out(0) = w(1) * B3(2);
    out(1) = -w(0) * B3(2);
  } else if (d == 3) {
    out(0) = w(1) * B3(2) - w(2) * B3(1);
    out(1) = w(2) * B3(0) - w(0) * B3(2);
    out(2) = w(0) * B3(1) - w(1) * B3(0);
  } else {
    throw CapabilityError("magnetic cross product requires dimension 2 or 3");
  }
  return out;
}

CVec cross_B(const CVec& w, const Vec& B3) {
  const int d = static_cast<int>(w.size());
  CVec out(d);
  if (d == 2) {
    out(0) = w(1) * B3(2);
    out(1) = -w(0) * B3(2);
  } else if (d == 3) {
    out(0) = w(1) * B3(2) - w(2) * B3(1);
    out(1) = w(2) * B3(0) - w(0) * B3(2);
    out(2) = w(0) * B3(1) - w(1) * B3(0);
  } else {
    throw CapabilityError("magnetic cross product requires dimension 2 or 3");
  }
  return out;
}

Vec field_E(const FieldAverages& fa, const WavePacketState& s,
            const CMat& Ups) {
  const int d = s.dim();
  Vec E = -fa.gradPhi - fa.dtA + fa.JA.transpose() * fa.A - fa.JAtA;
  if (!has_curvature(fa)) return E;

  const EpsContext ctx = make_context(s.Q, Ups);
  CVec corr(d);
  double coef = 0.0;
  for (int k = 0; k < d; ++k) {
    const Mat Mk = tensor_Mk(fa, k);
    const Mat D = Mk - fa.hessA[k];
    const Mat MJ = Mk * fa.JA;
    corr(k) = 0.5 * s.eps *
              ((D.cast<Cplx>() * ctx.R).trace() +
               (MJ.cast<Cplx>() * ctx.QQh).trace());
    coef += 0.5 * s.eps * (D.norm() + MJ.norm());
  }
  guard_imag("field_E", corr.imag().norm(), corr.real().norm(), coef,
             ctx.defect, 1e-9);
  E += corr.real();
  return E;
}

Mat field_S(const FieldAverages& fa, const WavePacketState& s, const Vec& v,
            const CMat& Ups) {
  const int d = s.dim();
  Mat S = -fa.hessPhi - fa.dtJA + fa.JA.transpose() * fa.JA - fa.JAtJA;
  if (!has_curvature(fa)) return S;

  for (int m = 0; m < d; ++m) S += fa.hessA[m] * fa.A(m);
  S -= fa.hessA_dot_A;
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int m = 0; m < d; ++m)
        S(k, l) += (fa.hessA[m](k, l) - fa.hessA[k](m, l)) * v(m);

  const EpsContext ctx = make_context(s.Q, Ups);
  CMat corr(d, d);
  double coef = 0.0;
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      const Mat F = tensor_F(fa, k, l);
      const Mat H = tensor_H(fa, k, l);
      const Mat D = F - H;
      const Mat FJ = F * fa.JA;
      corr(k, l) = 0.5 * s.eps *
                   ((D.cast<Cplx>() * ctx.R).trace() +
                    (FJ.cast<Cplx>() * ctx.QQh).trace());
      coef += 0.5 * s.eps * (D.norm() + FJ.norm());
    }
  }
  guard_imag("field_S", corr.imag().norm(), corr.real().norm(), coef,
             ctx.defect, 1e-10);
  S += corr.real();
  return S;
}

Mat mean_hess_h(const FieldAverages& fa, const WavePacketState& s,
                const Vec& v, const CMat& Ups) {
  const int d = s.dim();
  Mat MH = fa.JAtJA + fa.hessPhi;
  if (!has_curvature(fa)) return MH;

  for (int m = 0; m < d; ++m) MH -= fa.hessA[m] * (v(m) + fa.A(m));
  MH += fa.hessA_dot_A;

  const EpsContext ctx = make_context(s.Q, Ups);
  const CMat W = ctx.R + fa.JA.cast<Cplx>() * ctx.QQh;
  CMat corr(d, d);
  double coef = 0.0;
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      const Mat F = tensor_F(fa, k, l);
      corr(k, l) = -0.5 * s.eps * (F.cast<Cplx>() * W).trace();
      coef += 0.5 * s.eps * F.norm();
    }
  }
  guard_imag("mean_hess_h", corr.imag().norm(), corr.real().norm(),
             coef * (1.0 + fa.JA.norm()), ctx.defect, 1e-10);
  MH += corr.real();
  return MH;
}

double zeta_R_rhs(const FieldAverages& fa, const WavePacketState& s,
                  const Vec& v, const CMat& Ups) {
  const Mat MH = mean_hess_h(fa, s, v, Ups);
  const CMat QQh = s.Q * s.Q.adjoint();
  const double tr_h = (MH * QQh.real()).trace();
  const double tr_inv = QQh.inverse().trace().real();
  return 0.5 * v.squaredNorm() + fa.A.dot(v) - fa.phi +
         0.25 * s.eps * (tr_h - 2.0 * tr_inv);
}

TransformedRhs rhs_transformed(const WavePacketState& s,
                               const AverageEngine& engine) {
  const int d = s.dim();
  const FieldAverages fa = engine.field_averages(s);
  const Vec E = field_E(fa, s, s.Ups);
  const Mat S = field_S(fa, s, s.v, s.Ups);

  TransformedRhs r;
  r.dq = s.v;
  r.dv = cross_B(s.v, fa.B) + E;
  r.dQ = s.Ups;
  r.dUps = CMat(d, d);
  const CMat SQ = S.cast<Cplx>() * s.Q;
  for (int j = 0; j < d; ++j)
    r.dUps.col(j) = cross_B(CVec(s.Ups.col(j)), fa.B) + SQ.col(j);
  r.dzeta_R = zeta_R_rhs(fa, s, s.v, s.Ups);
  return r;
}

CanonicalRhs rhs_canonical(const CanonicalState& c,
                           const AverageEngine& engine) {
  const int d = c.dim();
  WavePacketState view;
  view.eps = c.eps;
  view.t = c.t;
  view.q = c.q;
  view.v = Vec::Zero(d);
  view.Q = c.Q;
  view.Ups = CMat::Zero(d, d);
  view.zeta_R = c.zeta_R;
  view.zeta_I = c.zeta_I;

  const FieldAverages fa = engine.field_averages(view);
  const Vec v = c.p - fa.A;
  const CMat Ups = c.P - fa.JA.cast<Cplx>() * c.Q;

  CanonicalRhs r;
  r.dq = v;
  r.dp = fa.JA.transpose() * v + fa.JA.transpose() * fa.A - fa.JAtA -
         fa.gradPhi;
  r.dQ = Ups;

  const Mat MH = mean_hess_h(fa, view, v, Ups);
  r.dP = fa.JA.transpose().cast<Cplx>() * c.P - MH.cast<Cplx>() * c.Q;

  const EpsContext ctx = make_context(c.Q, Ups);
  if (has_curvature(fa)) {
    CVec corr(d);
    double coef = 0.0;
    for (int k = 0; k < d; ++k) {
      const Mat Mk = tensor_Mk(fa, k);
      corr(k) = 0.5 * c.eps *
                ((Mk.cast<Cplx>() *
                  (ctx.R + fa.JA.cast<Cplx>() * ctx.QQh))
                     .trace());
      coef += 0.5 * c.eps * Mk.norm() * (1.0 + fa.JA.norm());
    }
    guard_imag("canonical momentum force", corr.imag().norm(),
               corr.real().norm(), coef, ctx.defect, 1e-9);
    r.dp += corr.real();
  }

  // Complex phase equation. The mean Hamiltonian uses <A>^2 rather than
  // <A^2>, consistent with the real phase equation in the transformed
  // variables.
  const CMat C = width_from_hagedorn(c.Q, c.P);
  const Mat CR = C.real();
  const Mat CI = C.imag();
  const CMat QQh = ctx.QQh;
  const Cplx RH =
      ((CR * CR + CI * CI - 2.0 * fa.JA.transpose() * CR).cast<Cplx>() * QQh)
          .trace();
  const Cplx mh = 0.5 * (c.p.dot(c.p) - 2.0 * c.p.dot(fa.A) +
                         fa.A.dot(fa.A)) +
                  fa.phi + 0.25 * c.eps * RH;
  const CMat BC = MH.cast<Cplx>() - fa.JA.transpose().cast<Cplx>() * C -
                  C * fa.JA.cast<Cplx>() + C * C;
  r.dzeta = -mh + 0.25 * c.eps * (BC * QQh).trace() +
            c.p.dot(c.p - fa.A);
  return r;
}

double ehrenfest_rhs(const WavePacketState& s, const Vec& mean_grad_w,
                     const Mat& mean_hess_w) {
  const EpsContext ctx = make_context(s.Q, s.Ups);
  const Cplx tr = (mean_hess_w.cast<Cplx>() * ctx.R).trace();
  return mean_grad_w.dot(s.v) + 0.5 * s.eps * tr.real();
}

}  // namespace gwp
