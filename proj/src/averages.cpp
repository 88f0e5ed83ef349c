#include "gwp/averages.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <map>
#include <mutex>

namespace gwp {

void gauss_hermite(int n, Vec& nodes, Vec& weights) {
  if (n < 1) throw ValidationError("quadrature order must be at least 1");
  static std::map<int, std::pair<Vec, Vec>> cache;
  static std::mutex mtx;
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) {
      nodes = it->second.first;
      weights = it->second.second;
      return;
    }
  }
  // Golub-Welsch on the Jacobi matrix of the Hermite weight e^{-y^2}.
  Mat J = Mat::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = std::sqrt(0.5 * i);
    J(i, i - 1) = b;
    J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  Vec x = es.eigenvalues();
  Vec w(n);
  const double mu0 = std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    w(i) = mu0 * v0 * v0;
  }
  {
    std::lock_guard<std::mutex> lock(mtx);
    cache[n] = {x, w};
  }
  nodes = x;
  weights = w;
}

QuadratureRule packet_quadrature(const WavePacketState& s, int order) {
  const int d = s.dim();
  Vec y1, w1;
  gauss_hermite(order, y1, w1);

  Mat Sigma = (s.Q * s.Q.adjoint()).real();
  Eigen::LLT<Mat> llt(Sigma);
  if (llt.info() != Eigen::Success)
    throw SingularWidth("packet covariance is not positive definite");
  Mat G = llt.matrixL();

  long total = 1;
  for (int i = 0; i < d; ++i) total *= order;
  QuadratureRule rule;
  rule.nodes = Mat(d, total);
  rule.weights = Vec(total);
  std::vector<int> idx(d, 0);
  const double se = std::sqrt(s.eps);
  for (long m = 0; m < total; ++m) {
    Vec y(d);
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      y(i) = y1(idx[i]);
      w *= w1(idx[i]);
    }
    rule.nodes.col(m) = s.q + se * (G * y);
    rule.weights(m) = w;
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < order) break;
      idx[i] = 0;
    }
  }
  // Fold the affine substitution into the weights so that raw averages are
  // plain weighted sums of the integrand at the nodes.
  double detG = 1.0;
  for (int i = 0; i < d; ++i) detG *= G(i, i);
  const double pref =
      std::pow(s.eps, 0.5 * d) * detG * std::exp(-2.0 * s.zeta_I / s.eps);
  rule.weights *= pref;
  return rule;
}

Cplx plane_wave_average(const WavePacketState& s, const Vec& k, double phase) {
  const Mat Sigma = (s.Q * s.Q.adjoint()).real();
  const double damp = std::exp(-0.25 * s.eps * k.dot(Sigma * k));
  const double mass = l2_norm_squared(s);
  const Cplx osc = std::exp(Cplx(0.0, k.dot(s.q) + phase));
  return mass * damp * osc;
}

AverageEngine::AverageEngine(const FieldModel& model, AveragesMode mode,
                             int quad_order)
    : model_(&model), mode_(mode), quad_order_(quad_order) {
  if (quad_order < 1)
    throw ValidationError("quadrature order must be at least 1");
}

AveragesMode AverageEngine::effective_mode() const {
  if (mode_ != AveragesMode::Auto) return mode_;
  const FieldCapabilities caps = model_->capabilities();
  if (caps.linear_A && caps.quadratic_phi) return AveragesMode::Point;
  if (caps.analytic_averages) return AveragesMode::Analytic;
  return AveragesMode::Quadrature;
}

FieldAverages AverageEngine::field_averages(const WavePacketState& s) const {
  switch (effective_mode()) {
    case AveragesMode::Point:
      return point_field_averages(*model_, s);
    case AveragesMode::Analytic: {
      FieldAverages out;
      if (!model_->fill_analytic_averages(s, out))
        throw CapabilityError("model has no analytic averages");
      return out;
    }
    case AveragesMode::Quadrature:
      return quadrature_field_averages(*model_, s, quad_order_);
    case AveragesMode::Auto:
      break;
  }
  throw ValidationError("unresolved averaging mode");
}

double AverageEngine::mean(
    const WavePacketState& s,
    const std::function<double(double, const Vec&)>& f) const {
  const QuadratureRule rule = packet_quadrature(s, quad_order_);
  double acc = 0.0;
  for (long m = 0; m < rule.weights.size(); ++m)
    acc += rule.weights(m) * f(s.t, rule.nodes.col(m));
  return acc;
}

Cplx AverageEngine::mean_c(
    const WavePacketState& s,
    const std::function<Cplx(double, const Vec&)>& f) const {
  const QuadratureRule rule = packet_quadrature(s, quad_order_);
  Cplx acc = 0.0;
  for (long m = 0; m < rule.weights.size(); ++m)
    acc += rule.weights(m) * f(s.t, rule.nodes.col(m));
  return acc;
}

FieldAverages quadrature_field_averages(const FieldModel& model,
                                        const WavePacketState& s, int order) {
  const int d = s.dim();
  if (model.dim() != d)
    throw DimensionError("field dimension does not match state");
  const QuadratureRule rule = packet_quadrature(s, order);

  FieldAverages out;
  out.mass = 0.0;
  out.A = Vec::Zero(d);
  out.dtA = Vec::Zero(d);
  out.JA = Mat::Zero(d, d);
  out.dtJA = Mat::Zero(d, d);
  out.JAtA = Vec::Zero(d);
  out.JAtJA = Mat::Zero(d, d);
  out.A2 = 0.0;
  out.hessA.assign(d, Mat::Zero(d, d));
  out.hessA_dot_A = Mat::Zero(d, d);
  out.d3A.assign(d, Tensor3(d));
  out.phi = 0.0;
  out.gradPhi = Vec::Zero(d);
  out.hessPhi = Mat::Zero(d, d);

  for (long m = 0; m < rule.weights.size(); ++m) {
    const double w = rule.weights(m);
    const Vec x = rule.nodes.col(m);
    const FieldDerivatives f = model.derivatives(s.t, x);
    out.mass += w;
    out.A += w * f.A;
    out.dtA += w * f.dtA;
    out.JA += w * f.JA;
    out.dtJA += w * f.dtJA;
    out.JAtA += w * (f.JA.transpose() * f.A);
    out.JAtJA += w * (f.JA.transpose() * f.JA);
    out.A2 += w * f.A.squaredNorm();
    out.phi += w * f.phi;
    out.gradPhi += w * f.gradPhi;
    out.hessPhi += w * f.hessPhi;
    for (int i = 0; i < d; ++i) {
      out.hessA[i] += w * f.hessA[i];
      out.hessA_dot_A += (w * f.A(i)) * f.hessA[i];
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          for (int c = 0; c < d; ++c)
            out.d3A[i](a, b, c) += w * f.d3A[i](a, b, c);
    }
  }

  const double inv = 1.0 / out.mass;
  out.A *= inv;
  out.dtA *= inv;
  out.JA *= inv;
  out.dtJA *= inv;
  out.JAtA *= inv;
  out.JAtJA *= inv;
  out.A2 *= inv;
  out.phi *= inv;
  out.gradPhi *= inv;
  out.hessPhi *= inv;
  out.hessA_dot_A *= inv;
  for (int i = 0; i < d; ++i) {
    out.hessA[i] *= inv;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) out.d3A[i](a, b, c) *= inv;
  }
  out.B = embedded_B(out.JA);
  return out;
}

FieldAverages point_field_averages(const FieldModel& model,
                                   const WavePacketState& s) {
  const FieldCapabilities caps = model.capabilities();
  if (!caps.linear_A || !caps.quadratic_phi)
    throw CapabilityError(
        "point averages require affine A and quadratic phi");
  const int d = s.dim();
  if (model.dim() != d)
    throw DimensionError("field dimension does not match state");

  const Mat Sigma = (s.Q * s.Q.adjoint()).real();
  FieldAverages out;
  out.mass = l2_norm_squared(s);
  out.A = model.A(s.t, s.q);
  out.dtA = model.dtA(s.t, s.q);
  out.JA = model.J_A(s.t, s.q);
  out.dtJA = model.dtJ_A(s.t, s.q);
  out.JAtA = out.JA.transpose() * out.A;
  out.JAtJA = out.JA.transpose() * out.JA;
  out.A2 = out.A.squaredNorm() +
           0.5 * s.eps * (out.JAtJA * Sigma).trace();
  out.hessA.assign(d, Mat::Zero(d, d));
  out.hessA_dot_A = Mat::Zero(d, d);
  out.d3A.assign(d, Tensor3(d));
  out.hessPhi = model.hessPhi(s.t, s.q);
  out.phi = model.phi(s.t, s.q) + 0.25 * s.eps * (out.hessPhi * Sigma).trace();
  out.gradPhi = model.gradPhi(s.t, s.q);
  out.B = embedded_B(out.JA);
  return out;
}

}  // namespace gwp
