#pragma once

#include "gwp/state.hpp"
#include "gwp/types.hpp"

namespace gwp {

struct FieldAverages;

struct FieldCapabilities {
  bool linear_A = false;      // A affine in x, all second derivatives vanish
  bool quadratic_phi = false; // phi quadratic in x, third derivatives vanish
  bool analytic_averages = false;
  bool time_dependent = false;
};

// Pointwise field data at one (t, x).
struct FieldDerivatives {
  Vec A;        // vector potential
  Vec dtA;      // time derivative of A
  Mat JA;       // Jacobian, JA(k, l) = d_l A_k
  Mat dtJA;     // time derivative of JA
  std::vector<Mat> hessA;  // hessA[m](k, l) = d_k d_l A_m
  std::vector<Tensor3> d3A;  // d3A[m](a, b, c) = d_a d_b d_c A_m
  double phi = 0.0;
  Vec gradPhi;
  Mat hessPhi;
  Vec B;  // magnetic field embedded as a 3-vector
};

class FieldModel {
 public:
  virtual ~FieldModel() = default;

  virtual int dim() const = 0;
  virtual FieldCapabilities capabilities() const = 0;

  virtual Vec A(double t, const Vec& x) const = 0;
  virtual Vec dtA(double t, const Vec& x) const;
  virtual Mat J_A(double t, const Vec& x) const = 0;
  virtual Mat dtJ_A(double t, const Vec& x) const;
  virtual Mat hessA(double t, const Vec& x, int m) const;
  virtual Tensor3 d3A(double t, const Vec& x, int m) const;

  virtual double phi(double t, const Vec& x) const = 0;
  virtual Vec gradPhi(double t, const Vec& x) const = 0;
  virtual Mat hessPhi(double t, const Vec& x) const = 0;

  // Magnetic field as an embedded 3-vector, derived from J_A by default.
  virtual Vec B(double t, const Vec& x) const;

  virtual FieldDerivatives derivatives(double t, const Vec& x) const;

  // Models with closed-form Gaussian averages fill `out` and return true.
  virtual bool fill_analytic_averages(const WavePacketState& s,
                                      FieldAverages& out) const {
    (void)s;
    (void)out;
    return false;
  }
};

// Embeds the curl of A (d = 2 or 3) as a 3-vector.
Vec embedded_B(const Mat& JA);

// Planar field with A = (sin s, -sin s), s = x1 + x2 + alpha t, and
// electrostatic potential phi = sin(x1 + x2).
class TrigField2D : public FieldModel {
 public:
  explicit TrigField2D(double alpha = 0.0) : alpha_(alpha) {}

  double alpha() const { return alpha_; }

  int dim() const override { return 2; }
  FieldCapabilities capabilities() const override;

  Vec A(double t, const Vec& x) const override;
  Vec dtA(double t, const Vec& x) const override;
  Mat J_A(double t, const Vec& x) const override;
  Mat dtJ_A(double t, const Vec& x) const override;
  Mat hessA(double t, const Vec& x, int m) const override;
  Tensor3 d3A(double t, const Vec& x, int m) const override;

  double phi(double t, const Vec& x) const override;
  Vec gradPhi(double t, const Vec& x) const override;
  Mat hessPhi(double t, const Vec& x) const override;

  bool fill_analytic_averages(const WavePacketState& s,
                              FieldAverages& out) const override;

 private:
  double alpha_;
};

// Ideal trap in scaled units: A = (r_B / 2)(-x2, x1, 0) and
// phi = r_omega (x3^2 - (x1^2 + x2^2) / 2), with r_B = r_omega + 1 by
// default so the slow planar mode has unit frequency.
class PenningField3D : public FieldModel {
 public:
  explicit PenningField3D(double r_omega, double r_B = -1.0)
      : r_omega_(r_omega), r_B_(r_B < 0.0 ? r_omega + 1.0 : r_B) {}

  double r_omega() const { return r_omega_; }
  double r_B() const { return r_B_; }

  int dim() const override { return 3; }
  FieldCapabilities capabilities() const override;

  Vec A(double t, const Vec& x) const override;
  Mat J_A(double t, const Vec& x) const override;

  double phi(double t, const Vec& x) const override;
  Vec gradPhi(double t, const Vec& x) const override;
  Mat hessPhi(double t, const Vec& x) const override;

 private:
  double r_omega_;
  double r_B_;
};

// Physical trap parameters in SI units.
struct TrapParameters {
  double mass_kg = 0.0;
  double B0_tesla = 0.0;
  double phi0_volts = 0.0;
  double delta_m = 0.0;  // characteristic trap length
};

struct PenningScalingResult {
  double omega_c = 0.0;      // cyclotron angular frequency, rad/s
  double omega_3 = 0.0;      // axial angular frequency, rad/s
  double Omega = 0.0;        // sqrt(omega_c^2 - 2 omega_3^2)
  double omega_plus = 0.0;   // modified cyclotron, rad/s
  double omega_minus = 0.0;  // magnetron, rad/s
  double nu_plus = 0.0;      // frequencies in Hz
  double nu_3 = 0.0;
  double nu_minus = 0.0;
  double ratio_omega = 0.0;  // omega_plus / omega_minus
  double ratio_B = 0.0;      // omega_c / omega_minus
  double eps = 0.0;          // semiclassical parameter
};

// Derives scaled trap constants from SI data. Throws UnstableTrap when
// omega_c^2 < 2 omega_3^2 and ValidationError on non-physical inputs.
PenningScalingResult penning_scaling(const TrapParameters& trap);

TrapParameters proton_trap();
TrapParameters electron_trap();

}  // namespace gwp
