#include "gwp/scenarios.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

namespace gwp {

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

WavePacketState sublinear_initial(double eps, const TrigField2D& field) {
  CanonicalState c;
  c.eps = eps;
  c.t = 0.0;
  c.q = Vec::Zero(2);
  c.p = Vec(2);
  c.p << 1.0, 0.0;
  c.Q = CMat::Identity(2, 2);
  c.P = Cplx(0.0, 1.0) * CMat::Identity(2, 2);
  c.zeta_R = 0.0;
  c = normalize_phase(c);

  WavePacketState probe;
  probe.eps = eps;
  probe.t = 0.0;
  probe.q = c.q;
  probe.v = c.p;
  probe.Q = c.Q;
  probe.Ups = c.P;
  probe.zeta_R = 0.0;
  probe.zeta_I = c.zeta_I;
  FieldAverages fa;
  field.fill_analytic_averages(probe, fa);
  return from_canonical(c, fa.A, fa.JA);
}

WavePacketState penning_initial(double eps, const PenningField3D& field) {
  CanonicalState c;
  c.eps = eps;
  c.t = 0.0;
  c.q = Vec(3);
  c.q << 0.133, 0.133, 0.258;
  c.p = Vec(3);
  c.p << 0.133, 7.492, 3.879;
  c.Q = CMat::Zero(3, 3);
  c.Q(0, 0) = 0.133;
  c.Q(1, 1) = 0.133;
  c.Q(2, 2) = 0.258;
  c.P = CMat::Zero(3, 3);
  c.P(0, 0) = Cplx(0.0, 7.492);
  c.P(1, 1) = Cplx(0.0, 7.492);
  c.P(2, 2) = Cplx(0.0, 3.879);
  c.zeta_R = 1.009;
  c = normalize_phase(c);
  return from_canonical(c, field.A(0.0, c.q), field.J_A(0.0, c.q));
}

WavePacketState penning_coherent_initial(double eps,
                                         const PenningField3D& field) {
  const double rw = field.r_omega();
  if (rw <= 1.0) throw ValidationError("coherent data requires r_omega > 1");
  const double a = std::sqrt(2.0 / (rw - 1.0));
  const double cz = std::pow(2.0 * rw, -0.25);
  CanonicalState c;
  c.eps = eps;
  c.t = 0.0;
  c.q = Vec(3);
  c.q << 0.133, 0.133, 0.258;
  c.p = Vec(3);
  c.p << 0.133, 7.492, 3.879;
  c.Q = CMat::Zero(3, 3);
  c.Q(0, 0) = a;
  c.Q(1, 1) = a;
  c.Q(2, 2) = cz;
  c.P = CMat::Zero(3, 3);
  c.P(0, 0) = Cplx(0.0, 1.0 / a);
  c.P(1, 1) = Cplx(0.0, 1.0 / a);
  c.P(2, 2) = Cplx(0.0, 1.0 / cz);
  c.zeta_R = 1.009;
  c = normalize_phase(c);
  return from_canonical(c, field.A(0.0, c.q), field.J_A(0.0, c.q));
}

std::vector<std::string> preset_names() {
  return {"sublinear-convergence", "sublinear-energy", "sublinear-l2",
          "penning-convergence", "penning-energy"};
}

ExperimentSpec preset_spec(const std::string& name) {
  ExperimentSpec s;
  s.preset = name;
  if (name == "sublinear-convergence") {
    s.field_kind = "trig";
    s.alpha = 1.0;
    s.eps_list = {1e-3};
    s.taus = {0.032, 0.016, 0.008, 0.004, 0.002, 0.001};
    s.t_end = 8.0;
    s.integrators = {Integrator::Boris, Integrator::MRK4};
    s.reference_integrator = "rk4";
    s.tau_ref = 1e-4;
    s.mode = AveragesMode::Analytic;
  } else if (name == "sublinear-energy") {
    s.field_kind = "trig";
    s.alpha = 0.0;
    s.eps_list = {1e-3};
    s.taus = {0.1, 0.05, 0.025, 0.0125};
    s.t_end = 200.0;
    s.integrators = {Integrator::Boris, Integrator::MRK4, Integrator::RK4};
    s.reference_integrator = "none";
    s.mode = AveragesMode::Analytic;
  } else if (name == "sublinear-l2") {
    s.field_kind = "trig";
    s.alpha = 1.0;
    s.eps_list = {1e-2, 1e-3, 1e-4};
    s.taus = {0.032, 0.016, 0.008, 0.004, 0.002, 0.001};
    s.t_end = 8.0;
    s.integrators = {Integrator::Boris, Integrator::MRK4};
    s.reference_integrator = "rk4";
    s.tau_ref = 1e-4;
    s.mode = AveragesMode::Analytic;
    s.with_l2 = true;
  } else if (name == "penning-convergence") {
    s.field_kind = "penning";
    s.r_omega = 113.25;
    s.eps_list = {penning_scaling(proton_trap()).eps};
    s.taus = {2e-3, 1e-3, 5e-4, 2.5e-4};
    s.t_end = 2.0 * M_PI;
    s.integrators = {Integrator::Boris, Integrator::MRK4, Integrator::RK4};
    s.reference_integrator = "mrk4";
    s.tau_ref = 1e-5;
    s.mode = AveragesMode::Point;
  } else if (name == "penning-energy") {
    s.field_kind = "penning";
    s.r_omega = 113.25;
    s.eps_list = {penning_scaling(proton_trap()).eps};
    s.taus = {2e-3, 1e-3};
    s.t_end = 2.0 * M_PI;
    s.integrators = {Integrator::Boris, Integrator::MRK4, Integrator::RK4};
    s.reference_integrator = "none";
    s.mode = AveragesMode::Point;
  } else {
    throw ValidationError("unknown preset: " + name);
  }
  return s;
}

std::shared_ptr<FieldModel> make_field(const ExperimentSpec& spec) {
  if (spec.field_kind == "trig")
    return std::make_shared<TrigField2D>(spec.alpha);
  if (spec.field_kind == "penning")
    return std::make_shared<PenningField3D>(spec.r_omega);
  throw ValidationError("unknown field kind: " + spec.field_kind);
}

WavePacketState make_initial(const ExperimentSpec& spec, double eps,
                             const FieldModel& field) {
  if (spec.field_kind == "trig")
    return sublinear_initial(eps,
                             dynamic_cast<const TrigField2D&>(field));
  const auto& pf = dynamic_cast<const PenningField3D&>(field);
  return spec.penning_coherent ? penning_coherent_initial(eps, pf)
                               : penning_initial(eps, pf);
}

RunOutput run_trajectory(const FieldModel& field, const WavePacketState& s0,
                         Integrator integrator, double tau, long nsteps,
                         AveragesMode mode, int quad_order) {
  RunOutput out;
  out.integrator = integrator;
  out.eps = s0.eps;
  out.tau = tau;
  const double t0 = now_seconds();
  const AverageEngine engine(field, mode, quad_order);
  try {
    out.records.reserve(static_cast<size_t>(nsteps) + 1);
    out.records.push_back(s0);
    if (integrator == Integrator::Boris) {
      BorisStaggeredState bs = boris_bootstrap(s0, engine, tau);
      for (long k = 1; k <= nsteps; ++k)
        out.records.push_back(boris_full_step(bs, engine));
    } else if (integrator == Integrator::MRK4) {
      WavePacketState s = s0;
      for (long k = 1; k <= nsteps; ++k) {
        s = mrk4_step(s, engine, tau);
        out.records.push_back(s);
      }
    } else {
      const FieldAverages fa0 = engine.field_averages(s0);
      CanonicalState c = to_canonical(s0, fa0.A, fa0.JA);
      WavePacketState view = s0;
      for (long k = 1; k <= nsteps; ++k) {
        c = rk4_step(c, engine, tau);
        view.t = c.t;
        view.q = c.q;
        view.Q = c.Q;
        view.zeta_I = c.zeta_I;
        const FieldAverages fa = engine.field_averages(view);
        out.records.push_back(from_canonical(c, fa.A, fa.JA));
      }
    }
  } catch (const Error& e) {
    out.failed = true;
    out.error = e.what();
  }
  out.runtime_s = now_seconds() - t0;
  return out;
}

Reference compute_reference(const FieldModel& field,
                            const WavePacketState& s0,
                            const std::string& integrator, double tau_ref,
                            long nsteps, long stride, AveragesMode mode,
                            int quad_order) {
  if (stride < 1) throw ValidationError("reference stride must be positive");
  Reference ref;
  ref.tau_ref = tau_ref;
  ref.stride = stride;
  ref.records.reserve(static_cast<size_t>(nsteps / stride) + 1);
  const AverageEngine engine(field, mode, quad_order);

  if (integrator == "rk4") {
    const FieldAverages fa0 = engine.field_averages(s0);
    CanonicalState c = to_canonical(s0, fa0.A, fa0.JA);
    ref.records.push_back(c);
    for (long k = 1; k <= nsteps; ++k) {
      c = rk4_step(c, engine, tau_ref);
      if (k % stride == 0) ref.records.push_back(c);
    }
  } else if (integrator == "mrk4") {
    WavePacketState s = s0;
    auto to_canon = [&](const WavePacketState& st) {
      const FieldAverages fa = engine.field_averages(st);
      return to_canonical(st, fa.A, fa.JA);
    };
    ref.records.push_back(to_canon(s));
    for (long k = 1; k <= nsteps; ++k) {
      s = mrk4_step(s, engine, tau_ref);
      if (k % stride == 0) ref.records.push_back(to_canon(s));
    }
  } else {
    throw ValidationError("unknown reference integrator: " + integrator);
  }
  return ref;
}

RunErrors compare_to_reference(const RunOutput& run, const Reference& ref,
                               const AverageEngine& engine, bool with_l2,
                               int l2_order) {
  RunErrors out;
  const double step_ratio = run.tau / (ref.tau_ref * ref.stride);
  const double rounded = std::llround(step_ratio);
  if (std::abs(step_ratio - rounded) > 1e-9 * std::max(1.0, step_ratio))
    throw ValidationError("run tau is not aligned with the reference grid");
  const long ratio = std::llround(step_ratio);

  for (size_t k = 0; k < run.records.size(); ++k) {
    const size_t idx = k * static_cast<size_t>(ratio);
    if (idx >= ref.records.size()) break;
    const WavePacketState& s = run.records[k];
    const FieldAverages fa = engine.field_averages(s);
    const CanonicalState c = to_canonical(s, fa.A, fa.JA);
    const CanonicalState& r = ref.records[idx];
    const ParameterErrors e = parameter_errors(c, r);
    out.max_param.q = std::max(out.max_param.q, e.q);
    out.max_param.p = std::max(out.max_param.p, e.p);
    out.max_param.Q = std::max(out.max_param.Q, e.Q);
    out.max_param.P = std::max(out.max_param.P, e.P);
    out.max_param.zeta_R = std::max(out.max_param.zeta_R, e.zeta_R);
    out.max_param.zeta_I = std::max(out.max_param.zeta_I, e.zeta_I);
    out.final_param = e;
    if (with_l2 && k > 0) {
      const L2Result l2 = l2_distance(c, r, l2_order);
      out.l2_max = std::max(out.l2_max, l2.distance);
      out.l2_final = l2.distance;
      out.l2_saturated = out.l2_saturated || l2.saturated;
    }
    ++out.compared;
  }
  return out;
}

std::vector<DiagnosticsPoint> diagnostics_series(
    const RunOutput& run, const AverageEngine& engine) {
  std::vector<DiagnosticsPoint> out;
  out.reserve(run.records.size());
  for (const WavePacketState& s : run.records) {
    const Diagnostics g = diagnostics(s, engine);
    DiagnosticsPoint p;
    p.t = s.t;
    p.norm = g.norm;
    p.energy = g.energy;
    p.sympl_r1 = g.sympl_r1;
    p.sympl_r2 = g.sympl_r2;
    p.det_Q_abs = g.det_Q_abs;
    p.zeta_R = s.zeta_R;
    p.zeta_I = s.zeta_I;
    out.push_back(p);
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, int jobs) {
  if (spec.eps_list.empty() || spec.taus.empty() || spec.integrators.empty())
    throw ValidationError("experiment lists must be non-empty");
  for (size_t i = 1; i < spec.taus.size(); ++i)
    if (spec.taus[i] >= spec.taus[i - 1])
      throw ValidationError("taus must be strictly decreasing");

  ExperimentResult result;
  result.spec = spec;

  for (double eps : spec.eps_list) {
    const std::shared_ptr<FieldModel> field = make_field(spec);
    const WavePacketState s0 = make_initial(spec, eps, *field);
    const AverageEngine engine(*field, spec.mode, spec.quad_order);

    Reference ref;
    const bool with_ref = spec.reference_integrator != "none";
    if (with_ref) {
      long stride = 0;
      long ref_steps = 0;
      for (double tau : spec.taus) {
        const double r = tau / spec.tau_ref;
        if (std::abs(r - std::llround(r)) > 1e-9 * r)
          throw ValidationError("tau is not an integer multiple of tau_ref");
        const long ratio = std::llround(r);
        const long n = std::llround(spec.t_end / tau);
        stride = (stride == 0) ? ratio : std::min(stride, ratio);
        ref_steps = std::max(ref_steps, n * ratio);
      }
      ref = compute_reference(*field, s0, spec.reference_integrator,
                              spec.tau_ref, ref_steps, stride, spec.mode,
                              spec.quad_order);
    }

    struct Cell {
      double tau;
      Integrator it;
    };
    std::vector<Cell> cells;
    for (double tau : spec.taus)
      for (Integrator it : spec.integrators) cells.push_back({tau, it});
    std::vector<RunResult> results(cells.size());

    auto work = [&](size_t i) {
      const Cell& cell = cells[i];
      RunResult rr;
      rr.eps = eps;
      rr.tau = cell.tau;
      rr.integrator = cell.it;
      const long n = std::llround(spec.t_end / cell.tau);
      const RunOutput run = run_trajectory(*field, s0, cell.it, cell.tau, n,
                                           spec.mode, spec.quad_order);
      rr.failed = run.failed;
      rr.error = run.error;
      rr.runtime_s = run.runtime_s;
      if (!run.failed && with_ref)
        rr.errors = compare_to_reference(run, ref, engine, spec.with_l2,
                                         spec.l2_order);
      results[i] = rr;
    };

    if (jobs <= 1) {
      for (size_t i = 0; i < cells.size(); ++i) work(i);
    } else {
      std::vector<std::thread> pool;
      std::atomic<size_t> next{0};
      for (int j = 0; j < jobs; ++j)
        pool.emplace_back([&]() {
          for (size_t i = next.fetch_add(1); i < cells.size();
               i = next.fetch_add(1))
            work(i);
        });
      for (auto& th : pool) th.join();
    }
    for (auto& rr : results) result.runs.push_back(rr);
  }
  return result;
}

}  // namespace gwp
