#include <doctest.h>

#include <cmath>
#include <random>

#include "gwp/averages.hpp"
#include "gwp/fields.hpp"
#include "gwp/observables.hpp"
#include "gwp/scenarios.hpp"
#include "gwp/state.hpp"

using namespace gwp;

namespace {

class ZeroField2D : public FieldModel {
 public:
  int dim() const override { return 2; }
  FieldCapabilities capabilities() const override {
    FieldCapabilities cap;
    cap.linear_A = true;
    cap.quadratic_phi = true;
    return cap;
  }
  Vec A(double, const Vec&) const override { return Vec::Zero(2); }
  Mat J_A(double, const Vec&) const override { return Mat::Zero(2, 2); }
  double phi(double, const Vec&) const override { return 0.0; }
  Vec gradPhi(double, const Vec&) const override { return Vec::Zero(2); }
  Mat hessPhi(double, const Vec&) const override { return Mat::Zero(2, 2); }
};

CanonicalState unit_canonical(int d, double eps) {
  WavePacketState s;
  s.eps = eps;
  s.t = 0.0;
  s.q = Vec::Zero(d);
  s.v = Vec::Zero(d);
  s.Q = CMat::Identity(d, d);
  s.Ups = Cplx(0.0, 1.0) * CMat::Identity(d, d);
  s.zeta_R = 0.0;
  s.zeta_I = 0.0;
  return to_canonical(normalize_phase(s), Vec::Zero(d), Mat::Zero(d, d));
}

}  // namespace

TEST_CASE("free packet energy has the exact closed form") {
  ZeroField2D field;
  AverageEngine engine(field);
  WavePacketState s;
  s.eps = 1e-2;
  s.t = 0.0;
  s.q = Vec::Zero(2);
  s.v = Vec(2);
  s.v << 0.7, -0.2;
  s.Q = CMat::Identity(2, 2);
  s.Ups = Cplx(0.0, 1.0) * CMat::Identity(2, 2);
  s.zeta_R = 0.0;
  s.zeta_I = 0.0;
  normalize_phase(s);

  double expected = 0.5 * s.v.squaredNorm() + 0.25 * s.eps * 2.0;
  CHECK(energy(s, engine) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("energy agrees with direct quadrature of the hamiltonian") {
  TrigField2D field(1.0);
  AverageEngine engine(field, AveragesMode::Quadrature, 16);
  WavePacketState s = sublinear_initial(1e-2, field);
  s.t = 0.2;

  FieldAverages fa = engine.field_averages(s);
  CMat P = s.Ups + fa.JA.cast<Cplx>() * s.Q;
  CMat C = width_from_hagedorn(s.Q, P);
  Vec p = s.v + fa.A;

  double quad = engine.mean(s, [&](double t, const Vec& x) {
    CVec grad = C * (x - s.q).cast<Cplx>() + p.cast<Cplx>() -
                field.A(t, x).cast<Cplx>();
    return 0.5 * grad.squaredNorm() + field.phi(t, x);
  });
  quad /= fa.mass;

  CHECK(energy(s, engine) == doctest::Approx(quad).epsilon(1e-9));

  // The canonical overload sees the same packet.
  CanonicalState c = to_canonical(s, fa.A, fa.JA);
  CHECK(energy(c, engine) == doctest::Approx(energy(s, engine)).epsilon(1e-12));
}

TEST_CASE("point and quadrature energies match on the linear trap") {
  PenningField3D field(113.25);
  std::mt19937_64 rng(71);
  WavePacketState s = random_symplectic_state(3, 1e-3, rng);
  double ep = energy(s, AverageEngine(field, AveragesMode::Point));
  double eq = energy(s, AverageEngine(field, AveragesMode::Quadrature, 12));
  CHECK(ep == doctest::Approx(eq).epsilon(1e-9));
}

TEST_CASE("overlap identity ties the closed form to quadrature") {
  CanonicalState a = unit_canonical(2, 1e-2);
  CanonicalState b = a;
  b.q(0) += 0.05;
  b.p(1) -= 0.03;

  Cplx ov = packet_overlap(a, b);
  L2Result l2 = l2_distance(a, b, 32);
  double na2 = l2_norm_squared(a);
  double nb2 = l2_norm_squared(b);
  double identity = na2 + nb2 - 2.0 * ov.real();
  CHECK(l2.distance * l2.distance ==
        doctest::Approx(identity).epsilon(1e-9).scale(1e-9));
  CHECK(!l2.saturated);

  // Self overlap is the squared norm.
  CHECK(std::abs(packet_overlap(a, a) - Cplx(na2, 0.0)) <= 1e-12);
}

TEST_CASE("overlap identity holds for general width matrices") {
  std::mt19937_64 rng(73);
  WavePacketState wa = random_symplectic_state(2, 1e-2, rng);
  WavePacketState wb = random_symplectic_state(2, 1e-2, rng);
  wb.q = wa.q + 0.02 * Vec::Ones(2);
  wb.v = wa.v;

  CanonicalState a = to_canonical(wa, Vec::Zero(2), Mat::Zero(2, 2));
  CanonicalState b = to_canonical(wb, Vec::Zero(2), Mat::Zero(2, 2));

  Cplx ov = packet_overlap(a, b);
  L2Result l2 = l2_distance(a, b, 40);
  double identity = l2_norm_squared(a) + l2_norm_squared(b) - 2.0 * ov.real();
  CHECK(l2.distance * l2.distance ==
        doctest::Approx(identity).epsilon(1e-8).scale(1e-9));
}

TEST_CASE("distant packets saturate the distance") {
  CanonicalState a = unit_canonical(2, 1e-2);
  CanonicalState b = a;
  b.q(0) += 0.6;

  L2Result l2 = l2_distance(a, b, 40);
  CHECK(l2.saturated);
  CHECK(l2.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));

  CHECK_THROWS_AS(
      l2_distance(a, unit_canonical(3, 1e-2)), DimensionError);
}

TEST_CASE("parameter errors follow the stated conventions") {
  CanonicalState a = unit_canonical(2, 1e-2);
  CanonicalState b = a;
  b.q(0) += 3e-3;
  b.q(1) -= 4e-3;
  b.p(0) += 1e-3;
  b.Q(0, 1) += Cplx(0.0, 2e-3);
  b.P(1, 1) -= Cplx(1e-3, 0.0);
  b.zeta_R += 5e-4;
  b.zeta_I -= 2e-4;

  ParameterErrors e = parameter_errors(a, b);
  CHECK(e.q == doctest::Approx(5e-3 / 2.0).epsilon(1e-12));
  CHECK(e.p == doctest::Approx(1e-3 / 2.0).epsilon(1e-12));
  CHECK(e.Q == doctest::Approx(2e-3 / 4.0).epsilon(1e-12));
  CHECK(e.P == doctest::Approx(1e-3 / 4.0).epsilon(1e-12));
  CHECK(e.zeta_R == doctest::Approx(5e-4).epsilon(1e-12));
  CHECK(e.zeta_I == doctest::Approx(2e-4).epsilon(1e-12));
  CHECK(e.max() == doctest::Approx(5e-3 / 2.0).epsilon(1e-12));

  CHECK_THROWS_AS(parameter_errors(a, unit_canonical(3, 1e-2)),
                  DimensionError);
}

TEST_CASE("diagnostics of a fresh scenario state are clean") {
  TrigField2D field(1.0);
  AverageEngine engine(field);
  WavePacketState s = sublinear_initial(1e-3, field);
  Diagnostics g = diagnostics(s, engine);
  CHECK(g.norm == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.sympl_r1 <= 1e-10);
  CHECK(g.sympl_r2 <= 1e-10);
  CHECK(g.det_Q_abs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isfinite(g.energy));
}
