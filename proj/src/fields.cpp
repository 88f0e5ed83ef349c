#include "gwp/fields.hpp"

#include <cmath>

#include "gwp/averages.hpp"

namespace gwp {

Vec FieldModel::dtA(double t, const Vec& x) const {
  (void)t;
  return Vec::Zero(x.size());
}

Mat FieldModel::dtJ_A(double t, const Vec& x) const {
  (void)t;
  return Mat::Zero(x.size(), x.size());
}

Mat FieldModel::hessA(double t, const Vec& x, int m) const {
  (void)t;
  (void)m;
  return Mat::Zero(x.size(), x.size());
}

Tensor3 FieldModel::d3A(double t, const Vec& x, int m) const {
  (void)t;
  (void)m;
  return Tensor3(static_cast<int>(x.size()));
}

Vec embedded_B(const Mat& JA) {
  const int d = static_cast<int>(JA.rows());
  Vec B = Vec::Zero(3);
  if (d == 2) {
    B(2) = JA(1, 0) - JA(0, 1);
  } else if (d == 3) {
    B(0) = JA(2, 1) - JA(1, 2);
    B(1) = JA(0, 2) - JA(2, 0);
    B(2) = JA(1, 0) - JA(0, 1);
  } else if (d != 1) {
    throw CapabilityError("magnetic field embedding requires dimension <= 3");
  }
  return B;
}

Vec FieldModel::B(double t, const Vec& x) const {
  return embedded_B(J_A(t, x));
}

FieldDerivatives FieldModel::derivatives(double t, const Vec& x) const {
  const int d = dim();
  FieldDerivatives out;
  out.A = A(t, x);
  out.dtA = dtA(t, x);
  out.JA = J_A(t, x);
  out.dtJA = dtJ_A(t, x);
  out.hessA.resize(d);
  out.d3A.resize(d);
  for (int m = 0; m < d; ++m) {
    out.hessA[m] = hessA(t, x, m);
    out.d3A[m] = d3A(t, x, m);
  }
  out.phi = phi(t, x);
  out.gradPhi = gradPhi(t, x);
  out.hessPhi = hessPhi(t, x);
  out.B = embedded_B(out.JA);
  return out;
}

namespace {

const Mat kTrigK = (Mat(2, 2) << 1.0, 1.0, -1.0, -1.0).finished();
const Mat kOnes2 = Mat::Ones(2, 2);

}  // namespace

FieldCapabilities TrigField2D::capabilities() const {
  FieldCapabilities c;
  c.linear_A = false;
  c.quadratic_phi = false;
  c.analytic_averages = true;
  c.time_dependent = (alpha_ != 0.0);
  return c;
}

Vec TrigField2D::A(double t, const Vec& x) const {
  const double s = x(0) + x(1) + alpha_ * t;
  Vec a(2);
  a << std::sin(s), -std::sin(s);
  return a;
}

Vec TrigField2D::dtA(double t, const Vec& x) const {
  const double s = x(0) + x(1) + alpha_ * t;
  Vec a(2);
  a << alpha_ * std::cos(s), -alpha_ * std::cos(s);
  return a;
}

Mat TrigField2D::J_A(double t, const Vec& x) const {
  const double s = x(0) + x(1) + alpha_ * t;
  return std::cos(s) * kTrigK;
}

Mat TrigField2D::dtJ_A(double t, const Vec& x) const {
  const double s = x(0) + x(1) + alpha_ * t;
  return -alpha_ * std::sin(s) * kTrigK;
}

Mat TrigField2D::hessA(double t, const Vec& x, int m) const {
  const double s = x(0) + x(1) + alpha_ * t;
  const double f = (m == 0) ? -std::sin(s) : std::sin(s);
  return f * kOnes2;
}

Tensor3 TrigField2D::d3A(double t, const Vec& x, int m) const {
  const double s = x(0) + x(1) + alpha_ * t;
  Tensor3 T(2);
  T.setConstant((m == 0) ? -std::cos(s) : std::cos(s));
  return T;
}

double TrigField2D::phi(double t, const Vec& x) const {
  (void)t;
  return std::sin(x(0) + x(1));
}

Vec TrigField2D::gradPhi(double t, const Vec& x) const {
  (void)t;
  const double c = std::cos(x(0) + x(1));
  Vec g(2);
  g << c, c;
  return g;
}

Mat TrigField2D::hessPhi(double t, const Vec& x) const {
  (void)t;
  return -std::sin(x(0) + x(1)) * kOnes2;
}

bool TrigField2D::fill_analytic_averages(const WavePacketState& s,
                                         FieldAverages& out) const {
  if (s.dim() != 2)
    throw DimensionError("trig field averages require dimension 2");
  const Vec k1 = Vec::Ones(2);
  const Vec k2 = 2.0 * Vec::Ones(2);
  const double mass = l2_norm_squared(s);

  const Cplx w1 = plane_wave_average(s, k1, alpha_ * s.t) / mass;
  const Cplx w2 = plane_wave_average(s, k2, 2.0 * alpha_ * s.t) / mass;
  const Cplx wp = plane_wave_average(s, k1, 0.0) / mass;
  const double S1 = w1.imag(), C1 = w1.real();
  const double S2 = w2.imag(), C2 = w2.real();
  const double Sp = wp.imag(), Cp = wp.real();

  out.mass = mass;
  out.A = Vec(2);
  out.A << S1, -S1;
  out.dtA = Vec(2);
  out.dtA << alpha_ * C1, -alpha_ * C1;
  out.JA = C1 * kTrigK;
  out.dtJA = -alpha_ * S1 * kTrigK;
  out.JAtA = S2 * Vec::Ones(2);
  out.JAtJA = (1.0 + C2) * kOnes2;
  out.A2 = 1.0 - C2;
  out.hessA.assign(2, Mat());
  out.hessA[0] = -S1 * kOnes2;
  out.hessA[1] = S1 * kOnes2;
  out.hessA_dot_A = (C2 - 1.0) * kOnes2;
  out.d3A.assign(2, Tensor3(2));
  out.d3A[0].setConstant(-C1);
  out.d3A[1].setConstant(C1);
  out.phi = Sp;
  out.gradPhi = Cp * Vec::Ones(2);
  out.hessPhi = -Sp * kOnes2;
  out.B = Vec::Zero(3);
  out.B(2) = -2.0 * C1;
  return true;
}

FieldCapabilities PenningField3D::capabilities() const {
  FieldCapabilities c;
  c.linear_A = true;
  c.quadratic_phi = true;
  c.analytic_averages = false;
  c.time_dependent = false;
  return c;
}

Vec PenningField3D::A(double t, const Vec& x) const {
  (void)t;
  Vec a(3);
  a << -0.5 * r_B_ * x(1), 0.5 * r_B_ * x(0), 0.0;
  return a;
}

Mat PenningField3D::J_A(double t, const Vec& x) const {
  (void)t;
  (void)x;
  Mat J = Mat::Zero(3, 3);
  J(0, 1) = -0.5 * r_B_;
  J(1, 0) = 0.5 * r_B_;
  return J;
}

double PenningField3D::phi(double t, const Vec& x) const {
  (void)t;
  return r_omega_ * (x(2) * x(2) - 0.5 * (x(0) * x(0) + x(1) * x(1)));
}

Vec PenningField3D::gradPhi(double t, const Vec& x) const {
  (void)t;
  Vec g(3);
  g << -r_omega_ * x(0), -r_omega_ * x(1), 2.0 * r_omega_ * x(2);
  return g;
}

Mat PenningField3D::hessPhi(double t, const Vec& x) const {
  (void)t;
  (void)x;
  Mat h = Mat::Zero(3, 3);
  h(0, 0) = -r_omega_;
  h(1, 1) = -r_omega_;
  h(2, 2) = 2.0 * r_omega_;
  return h;
}

namespace {

constexpr double kHBar = 1.054571817e-34;
constexpr double kElementaryCharge = 1.602176634e-19;
constexpr double kProtonMass = 1.673e-27;
constexpr double kElectronMass = 9.109e-31;

}  // namespace

PenningScalingResult penning_scaling(const TrapParameters& trap) {
  if (!(trap.mass_kg > 0.0) || !(trap.B0_tesla > 0.0) ||
      !(trap.phi0_volts > 0.0) || !(trap.delta_m > 0.0))
    throw ValidationError("trap parameters must be positive");

  PenningScalingResult r;
  r.omega_c = kElementaryCharge * trap.B0_tesla / trap.mass_kg;
  r.omega_3 = std::sqrt(kElementaryCharge * trap.phi0_volts /
                        (trap.mass_kg * trap.delta_m * trap.delta_m));
  const double disc = r.omega_c * r.omega_c - 2.0 * r.omega_3 * r.omega_3;
  if (disc <= 0.0)
    throw UnstableTrap("trap is unstable: omega_c^2 <= 2 omega_3^2");
  r.Omega = std::sqrt(disc);
  r.omega_plus = 0.5 * (r.omega_c + r.Omega);
  r.omega_minus = 0.5 * (r.omega_c - r.Omega);
  const double two_pi = 2.0 * M_PI;
  r.nu_plus = r.omega_plus / two_pi;
  r.nu_3 = r.omega_3 / two_pi;
  r.nu_minus = r.omega_minus / two_pi;
  r.ratio_omega = r.omega_plus / r.omega_minus;
  r.ratio_B = r.omega_c / r.omega_minus;
  r.eps = kHBar /
          (trap.mass_kg * r.omega_minus * trap.delta_m * trap.delta_m);
  return r;
}

TrapParameters proton_trap() {
  TrapParameters t;
  t.mass_kg = kProtonMass;
  t.B0_tesla = 5.050;
  t.phi0_volts = 53.10;
  t.delta_m = 0.00112;
  return t;
}

TrapParameters electron_trap() {
  TrapParameters t;
  t.mass_kg = kElectronMass;
  t.B0_tesla = 5.872;
  t.phi0_volts = 10.22;
  t.delta_m = 0.00335;
  return t;
}

}  // namespace gwp
