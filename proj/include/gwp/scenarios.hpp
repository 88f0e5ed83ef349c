#pragma once

#include <memory>
#include <string>
#include <vector>

#include "gwp/integrators.hpp"
#include "gwp/observables.hpp"

namespace gwp {

// Initial packet of the planar runs: centered at the origin with unit
// momentum, round unit width, unit norm.
WavePacketState sublinear_initial(double eps, const TrigField2D& field);

// Printed initial data of the trap runs (three-decimal parameters).
WavePacketState penning_initial(double eps, const PenningField3D& field);

// Full-precision coherent variant of the same packet: |det Q| and the
// envelope shape stay constant along the exact flow.
WavePacketState penning_coherent_initial(double eps,
                                         const PenningField3D& field);

struct ExperimentSpec {
  std::string preset;
  std::string field_kind;  // "trig" or "penning"
  double alpha = 1.0;      // trig drift parameter
  double r_omega = 113.25; // trap frequency ratio
  std::vector<double> eps_list;
  std::vector<double> taus;
  double t_end = 8.0;
  std::vector<Integrator> integrators;
  std::string reference_integrator = "rk4";  // "rk4" or "mrk4"
  double tau_ref = 1e-4;
  AveragesMode mode = AveragesMode::Auto;
  int quad_order = 10;
  bool with_l2 = false;
  int l2_order = 24;
  bool penning_coherent = false;
};

ExperimentSpec preset_spec(const std::string& name);
std::vector<std::string> preset_names();

std::shared_ptr<FieldModel> make_field(const ExperimentSpec& spec);
WavePacketState make_initial(const ExperimentSpec& spec, double eps,
                             const FieldModel& field);

// One fixed-step trajectory with records at every integer step, in the
// transformed variables for all integrators.
struct RunOutput {
  Integrator integrator = Integrator::Boris;
  double eps = 0.0;
  double tau = 0.0;
  bool failed = false;
  std::string error;
  std::vector<WavePacketState> records;
  double runtime_s = 0.0;
};

RunOutput run_trajectory(const FieldModel& field, const WavePacketState& s0,
                         Integrator integrator, double tau, long nsteps,
                         AveragesMode mode, int quad_order);

// Fine reference trajectory stored in canonical variables every `stride`
// steps.
struct Reference {
  double tau_ref = 0.0;
  long stride = 1;
  std::vector<CanonicalState> records;
};

Reference compute_reference(const FieldModel& field,
                            const WavePacketState& s0,
                            const std::string& integrator, double tau_ref,
                            long nsteps, long stride, AveragesMode mode,
                            int quad_order);

// Maximum-over-time deviations between a run and the reference at the
// shared record times.
struct RunErrors {
  ParameterErrors max_param;
  ParameterErrors final_param;
  double l2_max = 0.0;
  double l2_final = 0.0;
  bool l2_saturated = false;
  long compared = 0;
};

RunErrors compare_to_reference(const RunOutput& run, const Reference& ref,
                               const AverageEngine& engine, bool with_l2,
                               int l2_order);

struct DiagnosticsPoint {
  double t = 0.0;
  double norm = 0.0;
  double energy = 0.0;
  double sympl_r1 = 0.0;
  double sympl_r2 = 0.0;
  double det_Q_abs = 0.0;
  double zeta_R = 0.0;
  double zeta_I = 0.0;
};

std::vector<DiagnosticsPoint> diagnostics_series(const RunOutput& run,
                                                 const AverageEngine& engine);

// Result of one grid cell of an experiment.
struct RunResult {
  double eps = 0.0;
  double tau = 0.0;
  Integrator integrator = Integrator::Boris;
  bool failed = false;
  std::string error;
  RunErrors errors;
  double runtime_s = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<RunResult> runs;
};

ExperimentResult run_experiment(const ExperimentSpec& spec, int jobs = 1);

}  // namespace gwp
