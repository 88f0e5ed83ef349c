#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "gwp/state.hpp"

using namespace gwp;

namespace {

WavePacketState unit_packet(int d, double eps) {
  WavePacketState s;
  s.eps = eps;
  s.q = Vec::Zero(d);
  s.v = Vec::Zero(d);
  s.Q = CMat::Identity(d, d);
  s.Ups = Cplx(0.0, 1.0) * CMat::Identity(d, d);
  return normalize_phase(s);
}

}  // namespace

TEST_CASE("normalized phase for the round unit packet") {
  WavePacketState s = unit_packet(2, 1e-3);
  const double expected = 0.5e-3 * std::log(1e-3 * M_PI);
  CHECK(s.zeta_I == doctest::Approx(expected).epsilon(1e-14));
  CHECK(s.zeta_I == doctest::Approx(-2.8815126965663684e-3).epsilon(1e-12));
  CHECK(l2_norm_squared(s) == doctest::Approx(1.0).epsilon(1e-13));

  WavePacketState t = unit_packet(3, 1.0);
  CHECK(t.zeta_I == doctest::Approx(0.75 * std::log(M_PI)).epsilon(1e-14));
  CHECK(l2_norm_squared(t) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("norm formula tracks the determinant and the imaginary phase") {
  WavePacketState s = unit_packet(2, 0.5);
  s.Q *= 2.0;  // |det Q| = 4
  // norm^2 = exp(-2 zI / eps) (eps pi)^{d/2} |det Q|
  const double expect = std::exp(-2.0 * s.zeta_I / s.eps) * (0.5 * M_PI) * 4.0;
  CHECK(l2_norm_squared(s) == doctest::Approx(expect).epsilon(1e-13));
  WavePacketState n = normalize_phase(s);
  CHECK(l2_norm_squared(n) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("log_abs_det matches the direct determinant") {
  CMat M(2, 2);
  M << Cplx(1.0, 2.0), Cplx(0.5, -0.25), Cplx(-1.5, 0.75), Cplx(2.0, 1.0);
  CHECK(log_abs_det(M) ==
        doctest::Approx(std::log(std::abs(M.determinant()))).epsilon(1e-13));
  CMat Z = CMat::Zero(2, 2);
  CHECK_THROWS_AS(log_abs_det(Z), SingularWidth);
}

TEST_CASE("random symplectic states satisfy the exact relations") {
  std::mt19937_64 rng(12345);
  for (int k = 0; k < 8; ++k) {
    const int d = (k % 2 == 0) ? 2 : 3;
    WavePacketState s = random_symplectic_state(d, 0.25, rng);
    SymplecticityResidual r = symplecticity_residual(s.Q, s.Ups);
    CHECK(r.r1 <= 1e-12);
    CHECK(r.r2 <= 1e-12);
    CHECK(l2_norm_squared(s) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("width matrix solves C Q = P and has the inverse-covariance "
          "imaginary part") {
  std::mt19937_64 rng(777);
  for (int k = 0; k < 8; ++k) {
    const int d = (k % 2 == 0) ? 2 : 3;
    WavePacketState s = random_symplectic_state(d, 0.1, rng);
    CMat C = width_from_hagedorn(s.Q, s.Ups);

    // Right-multiplication recovers P; a transposed solve would not.
    CHECK((C * s.Q - s.Ups).norm() <= 1e-10 * s.Ups.norm());
    // Complex symmetry.
    CHECK((C - C.transpose()).norm() <= 1e-10 * C.norm());
    // Im C equals the inverse of the real covariance factor Q Q^H.
    Mat CI = C.imag();
    Mat QQs = (s.Q * s.Q.adjoint()).real();
    CHECK((CI * QQs - Mat::Identity(d, d)).norm() <= 1e-10);
  }
  CHECK_THROWS_AS(width_from_hagedorn(CMat::Zero(2, 2),
                                      CMat::Identity(2, 2)),
                  SingularWidth);
}

TEST_CASE("canonical round trip is exact for matching averages") {
  std::mt19937_64 rng(31);
  WavePacketState s = random_symplectic_state(3, 0.05, rng);
  Vec meanA(3);
  meanA << 0.3, -0.2, 0.1;
  Mat meanJA(3, 3);
  meanJA << 0.0, 0.5, 0.0, -0.5, 0.0, 0.25, 0.0, -0.25, 0.0;

  CanonicalState c = to_canonical(s, meanA, meanJA);
  CHECK((c.p - (s.v + meanA)).norm() <= 1e-14);
  CHECK((c.P - (s.Ups + meanJA * s.Q)).norm() <= 1e-14 * c.P.norm());

  WavePacketState back = from_canonical(c, meanA, meanJA);
  CHECK((back.q - s.q).norm() <= 1e-14);
  CHECK((back.v - s.v).norm() <= 1e-13);
  CHECK((back.Q - s.Q).norm() <= 1e-14);
  CHECK((back.Ups - s.Ups).norm() <= 1e-13);
  CHECK(back.zeta_R == doctest::Approx(s.zeta_R).epsilon(1e-14));
  CHECK(back.zeta_I == doctest::Approx(s.zeta_I).epsilon(1e-14));
}

TEST_CASE("packet evaluation matches the closed form at the center") {
  WavePacketState s = unit_packet(2, 0.5);
  s.v = Vec::Zero(2);
  CanonicalState c = to_canonical(s, Vec::Zero(2), Mat::Zero(2, 2));
  // At x = q the Gaussian factor is 1 and only the phase remains.
  Cplx val = evaluate_packet(c, c.q);
  Cplx expect = std::exp(Cplx(0.0, 1.0) * Cplx(c.zeta_R, c.zeta_I) /
                         Cplx(c.eps, 0.0));
  CHECK(std::abs(val - expect) <= 1e-13 * std::abs(expect));
}

TEST_CASE("validation rejects inconsistent shapes and non-finite entries") {
  WavePacketState s = unit_packet(2, 1e-2);
  s.v = Vec::Zero(3);
  CHECK_THROWS_AS(validate_state(s), DimensionError);

  WavePacketState t = unit_packet(2, 1e-2);
  t.q(0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate_state(t), NonFiniteState);

  WavePacketState u = unit_packet(2, -1.0);
  CHECK_THROWS_AS(validate_state(u), ValidationError);
}
