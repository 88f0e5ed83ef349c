#include "gwp/state.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <cmath>

namespace gwp {

namespace {

bool all_finite(const Vec& v) { return v.allFinite(); }
bool all_finite(const CMat& m) { return m.allFinite(); }

void check_dims(int d, const Vec& a, const Vec& b, const CMat& M1,
                const CMat& M2) {
  if (d <= 0) throw DimensionError("state dimension must be positive");
  if (a.size() != d || b.size() != d)
    throw DimensionError("vector parameter size does not match dimension");
  if (M1.rows() != d || M1.cols() != d || M2.rows() != d || M2.cols() != d)
    throw DimensionError("matrix parameter shape does not match dimension");
}

}  // namespace

void validate_state(const WavePacketState& s) {
  check_dims(s.dim(), s.q, s.v, s.Q, s.Ups);
  if (!(s.eps > 0.0)) throw ValidationError("eps must be positive");
  if (!all_finite(s.q) || !all_finite(s.v) || !all_finite(s.Q) ||
      !all_finite(s.Ups) || !std::isfinite(s.zeta_R) ||
      !std::isfinite(s.zeta_I) || !std::isfinite(s.t))
    throw NonFiniteState("state contains non-finite entries");
}

void validate_state(const CanonicalState& s) {
  check_dims(s.dim(), s.q, s.p, s.Q, s.P);
  if (!(s.eps > 0.0)) throw ValidationError("eps must be positive");
  if (!all_finite(s.q) || !all_finite(s.p) || !all_finite(s.Q) ||
      !all_finite(s.P) || !std::isfinite(s.zeta_R) ||
      !std::isfinite(s.zeta_I) || !std::isfinite(s.t))
    throw NonFiniteState("state contains non-finite entries");
}

double log_abs_det(const CMat& M) {
  Eigen::PartialPivLU<CMat> lu(M);
  double s = 0.0;
  for (int i = 0; i < M.rows(); ++i) {
    double a = std::abs(lu.matrixLU()(i, i));
    if (a == 0.0) throw SingularWidth("determinant is zero");
    s += std::log(a);
  }
  if (!std::isfinite(s)) throw SingularWidth("determinant is not finite");
  return s;
}

CMat width_from_hagedorn(const CMat& Q, const CMat& P) {
  // C = P Q^{-1}, computed as the transposed solution of Q^T X = P^T.
  Eigen::PartialPivLU<CMat> lu(CMat(Q.transpose()));
  double min_piv = 1e300, max_piv = 0.0;
  for (int i = 0; i < Q.rows(); ++i) {
    double a = std::abs(lu.matrixLU()(i, i));
    min_piv = std::min(min_piv, a);
    max_piv = std::max(max_piv, a);
  }
  if (min_piv == 0.0 || min_piv < 1e-14 * max_piv)
    throw SingularWidth("Hagedorn factor Q is numerically singular");
  CMat C = lu.solve(CMat(P.transpose())).transpose();
  C = CMat(0.5 * (C + C.transpose().eval()));
  if (!C.allFinite()) throw SingularWidth("width matrix is not finite");
  return C;
}

SymplecticityResidual symplecticity_residual(const CMat& Q, const CMat& P) {
  const int d = static_cast<int>(Q.rows());
  SymplecticityResidual r;
  r.r1 = (Q.transpose() * P - P.transpose() * Q).norm();
  CMat m2 = Q.adjoint() * P - P.adjoint() * Q -
            Cplx(0.0, 2.0) * CMat::Identity(d, d);
  r.r2 = m2.norm();
  return r;
}

namespace {

double norm_squared_impl(double eps, int d, const CMat& Q, double zeta_I) {
  return std::exp(-2.0 * zeta_I / eps) * std::pow(eps * M_PI, 0.5 * d) *
         std::exp(log_abs_det(Q));
}

double unit_norm_zeta_I(double eps, int d, const CMat& Q) {
  return 0.5 * eps * (0.5 * d * std::log(eps * M_PI) + log_abs_det(Q));
}

}  // namespace

double l2_norm_squared(const WavePacketState& s) {
  return norm_squared_impl(s.eps, s.dim(), s.Q, s.zeta_I);
}

double l2_norm_squared(const CanonicalState& s) {
  return norm_squared_impl(s.eps, s.dim(), s.Q, s.zeta_I);
}

WavePacketState normalize_phase(WavePacketState s) {
  s.zeta_I = unit_norm_zeta_I(s.eps, s.dim(), s.Q);
  return s;
}

CanonicalState normalize_phase(CanonicalState s) {
  s.zeta_I = unit_norm_zeta_I(s.eps, s.dim(), s.Q);
  return s;
}

CanonicalState to_canonical(const WavePacketState& s, const Vec& meanA,
                            const Mat& meanJA) {
  CanonicalState c;
  c.eps = s.eps;
  c.t = s.t;
  c.q = s.q;
  c.p = s.v + meanA;
  c.Q = s.Q;
  c.P = s.Ups + meanJA.cast<Cplx>() * s.Q;
  c.zeta_R = s.zeta_R;
  c.zeta_I = s.zeta_I;
  return c;
}

WavePacketState from_canonical(const CanonicalState& c, const Vec& meanA,
                               const Mat& meanJA) {
  WavePacketState s;
  s.eps = c.eps;
  s.t = c.t;
  s.q = c.q;
  s.v = c.p - meanA;
  s.Q = c.Q;
  s.Ups = c.P - meanJA.cast<Cplx>() * c.Q;
  s.zeta_R = c.zeta_R;
  s.zeta_I = c.zeta_I;
  return s;
}

Cplx evaluate_packet(const CanonicalState& c, const Vec& x) {
  const CMat C = width_from_hagedorn(c.Q, c.P);
  const CVec dx = (x - c.q).cast<Cplx>();
  const Cplx quad = 0.5 * dx.dot(C * dx);  // dot conjugates, dx is real
  const Cplx lin = dx.dot(c.p.cast<Cplx>());
  const Cplx zeta(c.zeta_R, c.zeta_I);
  const Cplx i_over_eps(0.0, 1.0 / c.eps);
  return std::exp(i_over_eps * (quad + lin + zeta));
}

Cplx evaluate_packet(const WavePacketState& s, const Vec& x, const Vec& meanA,
                     const Mat& meanJA) {
  return evaluate_packet(to_canonical(s, meanA, meanJA), x);
}

WavePacketState random_symplectic_state(int dim, double eps,
                                        std::mt19937_64& rng) {
  if (dim <= 0) throw DimensionError("dimension must be positive");
  if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto rmat = [&](int r, int c) {
    Mat m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m(i, j) = gauss(rng);
    return m;
  };

  // A width matrix C = CR + i CI with CI positive definite gives a valid
  // packet; (Q, P) built from its square root satisfies both pairing
  // relations exactly, and a random unitary right factor mixes Q's phases.
  const Mat Craw = rmat(dim, dim);
  const Mat CR = 0.5 * (Craw + Craw.transpose());
  const Mat Bm = rmat(dim, dim);
  const Mat CI = Bm * Bm.transpose() + dim * Mat::Identity(dim, dim);

  Eigen::SelfAdjointEigenSolver<Mat> es(CI);
  const Mat CIinvsqrt = es.operatorInverseSqrt();

  CMat Z(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) Z(i, j) = Cplx(gauss(rng), gauss(rng));
  const Eigen::HouseholderQR<CMat> qr(Z);
  const CMat U = qr.householderQ();

  WavePacketState s;
  s.eps = eps;
  s.t = 0.0;
  s.q = Vec(dim);
  s.v = Vec(dim);
  for (int i = 0; i < dim; ++i) {
    s.q(i) = gauss(rng);
    s.v(i) = gauss(rng);
  }
  s.Q = CIinvsqrt.cast<Cplx>() * U;
  s.Ups = (CR.cast<Cplx>() + Cplx(0.0, 1.0) * CI.cast<Cplx>()) * s.Q;
  s.zeta_R = gauss(rng);
  return normalize_phase(s);
}

}  // namespace gwp
