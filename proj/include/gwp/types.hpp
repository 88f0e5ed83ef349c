#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gwp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Cplx = std::complex<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class SingularWidth : public Error {
 public:
  using Error::Error;
};

class CapabilityError : public Error {
 public:
  using Error::Error;
};

class ImaginaryResidual : public Error {
 public:
  using Error::Error;
};

class NonFiniteState : public Error {
 public:
  using Error::Error;
};

class UnstableTrap : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Dense symmetric rank-3 array of shape d x d x d, stored row-major.
class Tensor3 {
 public:
  Tensor3() : d_(0) {}
  explicit Tensor3(int d) : d_(d), v_(static_cast<size_t>(d) * d * d, 0.0) {}

  int dim() const { return d_; }

  double& operator()(int a, int b, int c) {
    return v_[static_cast<size_t>((a * d_ + b) * d_ + c)];
  }
  double operator()(int a, int b, int c) const {
    return v_[static_cast<size_t>((a * d_ + b) * d_ + c)];
  }

  void setZero() { std::fill(v_.begin(), v_.end(), 0.0); }
  void setConstant(double x) { std::fill(v_.begin(), v_.end(), x); }

  double frobenius_norm() const {
    double s = 0.0;
    for (double x : v_) s += x * x;
    return std::sqrt(s);
  }

  // Contraction over the first index: out(b, c) = sum_a w(a) T(a, b, c).
  Mat contract_first(const Vec& w) const {
    Mat out = Mat::Zero(d_, d_);
    for (int a = 0; a < d_; ++a)
      for (int b = 0; b < d_; ++b)
        for (int c = 0; c < d_; ++c) out(b, c) += w(a) * (*this)(a, b, c);
    return out;
  }

 private:
  int d_;
  std::vector<double> v_;
};

}  // namespace gwp
