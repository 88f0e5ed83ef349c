#pragma once

#include <functional>
#include <memory>

#include "gwp/fields.hpp"
#include "gwp/state.hpp"
#include "gwp/types.hpp"

namespace gwp {

// Gaussian averages of the field data against |u|^2. `mass` is the raw
// integral of |u|^2; every other entry is normalized by it.
struct FieldAverages {
  double mass = 0.0;

  Vec A;
  Vec dtA;
  Mat JA;
  Mat dtJA;
  Vec JAtA;    // <J_A^T A>
  Mat JAtJA;   // <J_A^T J_A>
  double A2 = 0.0;  // <|A|^2>
  std::vector<Mat> hessA;
  Mat hessA_dot_A;  // sum_m <(hess A_m) A_m>
  std::vector<Tensor3> d3A;

  double phi = 0.0;
  Vec gradPhi;
  Mat hessPhi;

  Vec B;  // embedded 3-vector
};

enum class AveragesMode { Auto, Quadrature, Analytic, Point };

struct QuadratureRule {
  Mat nodes;    // d x n, standard coordinates y
  Vec weights;  // n Gauss-Hermite tensor weights
};

// Nodes and weights of the n-point Gauss-Hermite rule for weight e^{-y^2}.
void gauss_hermite(int n, Vec& nodes, Vec& weights);

// Tensorized rule adapted to the packet: x = q + sqrt(eps) G y with
// G G^T = Re(Q Q^H).
QuadratureRule packet_quadrature(const WavePacketState& s, int order);

// Raw Gaussian average <e^{i (k . x + phase)}> in closed form.
Cplx plane_wave_average(const WavePacketState& s, const Vec& k, double phase);

class AverageEngine {
 public:
  explicit AverageEngine(const FieldModel& model,
                         AveragesMode mode = AveragesMode::Auto,
                         int quad_order = 10);

  const FieldModel& model() const { return *model_; }
  int quad_order() const { return quad_order_; }

  // Mode the engine selects for a given request.
  AveragesMode effective_mode() const;

  FieldAverages field_averages(const WavePacketState& s) const;

  // Raw quadrature average of a scalar observable against |u|^2.
  double mean(const WavePacketState& s,
              const std::function<double(double, const Vec&)>& f) const;
  Cplx mean_c(const WavePacketState& s,
              const std::function<Cplx(double, const Vec&)>& f) const;

 private:
  const FieldModel* model_;
  AveragesMode mode_;
  int quad_order_;
};

// Quadrature evaluation of every field average; works for any model.
FieldAverages quadrature_field_averages(const FieldModel& model,
                                        const WavePacketState& s, int order);

// Exact averages for models with affine A and quadratic phi.
FieldAverages point_field_averages(const FieldModel& model,
                                   const WavePacketState& s);

}  // namespace gwp
