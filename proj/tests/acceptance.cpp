#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "gwp/averages.hpp"
#include "gwp/eom.hpp"
#include "gwp/fields.hpp"
#include "gwp/integrators.hpp"
#include "gwp/io.hpp"
#include "gwp/observables.hpp"
#include "gwp/scenarios.hpp"
#include "gwp/state.hpp"

using namespace gwp;

namespace {

int g_jobs = 1;

struct Clause {
  std::string text;
  bool pass = false;
};

struct Criterion {
  std::string title;
  std::vector<Clause> clauses;

  void add(bool pass, const std::string& text) {
    clauses.push_back({text, pass});
  }
  bool pass() const {
    for (const Clause& c : clauses)
      if (!c.pass) return false;
    return true;
  }
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

bool within_factor(double value, double target, double factor) {
  if (!(value > 0.0) || !(target > 0.0)) return false;
  const double r = value / target;
  return r <= factor && r >= 1.0 / factor;
}

bool in_band(double value, double lo, double hi) {
  return std::isfinite(value) && value >= lo && value <= hi;
}

const RunResult* find_run(const ExperimentResult& res, Integrator it,
                          double eps, double tau) {
  for (const RunResult& r : res.runs)
    if (r.integrator == it && std::abs(r.eps - eps) <= 1e-12 * eps &&
        std::abs(r.tau - tau) <= 1e-12 * tau && !r.failed)
      return &r;
  return nullptr;
}

double slope_of(const std::vector<SlopeRow>& rows, Integrator it, double eps,
                const std::string& quantity) {
  for (const SlopeRow& row : rows)
    if (row.integrator == it && row.quantity == quantity &&
        std::abs(row.eps - eps) <= 1e-12 * eps)
      return row.analysis.lsq_slope;
  return std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------------
// Criterion 1: convergence orders of the planar oscillating field study.

Criterion criterion_convergence() {
  Criterion c;
  c.title = "parameter convergence orders";

  ExperimentSpec spec = preset_spec("sublinear-convergence");
  ExperimentResult res = run_experiment(spec, g_jobs);
  std::vector<SlopeRow> rows = experiment_slopes(res);
  const double eps = spec.eps_list[0];

  const std::vector<std::string> quantities = {"q", "p", "Q",
                                               "P", "zeta_R", "zeta_I"};
  for (const std::string& qn : quantities) {
    const double sb = slope_of(rows, Integrator::Boris, eps, qn);
    c.add(in_band(sb, 1.8, 2.2),
          "boris " + qn + " slope " + num(sb) + " in [1.8, 2.2]");
  }
  for (const std::string& qn : quantities) {
    const double sm = slope_of(rows, Integrator::MRK4, eps, qn);
    c.add(in_band(sm, 3.7, 4.3),
          "mrk4 " + qn + " slope " + num(sm) + " in [3.7, 4.3]");
  }

  const RunResult* coarse = find_run(res, Integrator::Boris, eps, 0.032);
  const RunResult* fine = find_run(res, Integrator::Boris, eps, 0.001);
  const double e_coarse = coarse ? coarse->errors.max_param.q : 0.0;
  const double e_fine = fine ? fine->errors.max_param.q : 0.0;
  c.add(within_factor(e_coarse, 1.02e-2, 3.0),
        "boris q error " + num(e_coarse) +
            " at tau 0.032 within 3x of 1.02e-2");
  c.add(within_factor(e_fine, 9.97e-6, 3.0),
        "boris q error " + num(e_fine) + " at tau 0.001 within 3x of 9.97e-6");
  return c;
}

// ---------------------------------------------------------------------
// Criterion 2: wave function error and its scaling in eps.

Criterion criterion_l2() {
  Criterion c;
  c.title = "wave function error scaling";

  ExperimentSpec spec = preset_spec("sublinear-l2");
  ExperimentResult res = run_experiment(spec, g_jobs);

  const RunResult* anchor = find_run(res, Integrator::Boris, 1e-3, 0.001);
  const double l2_anchor = anchor ? anchor->errors.l2_max : 0.0;
  c.add(within_factor(l2_anchor, 3.84e-3, 3.0),
        "boris l2 error " + num(l2_anchor) +
            " at eps 1e-3, tau 0.001 within 3x of 3.84e-3");

  const RunResult* big = find_run(res, Integrator::Boris, 1e-2, 0.004);
  const RunResult* mid = find_run(res, Integrator::Boris, 1e-3, 0.004);
  const double ratio = (big && mid && big->errors.l2_max > 0.0)
                           ? mid->errors.l2_max / big->errors.l2_max
                           : 0.0;
  c.add(in_band(ratio, 3.0, 30.0),
        "l2 ratio eps 1e-3 over 1e-2 at tau 0.004 is " + num(ratio) +
            " in [3, 30]");

  for (double eps : spec.eps_list) {
    double floor = std::numeric_limits<double>::infinity();
    for (double tau : {0.004, 0.002, 0.001}) {
      const RunResult* r = find_run(res, Integrator::MRK4, eps, tau);
      if (r) floor = std::min(floor, r->errors.l2_max);
    }
    c.add(floor <= 1e-6, "mrk4 l2 floor " + num(floor) + " at eps " +
                             num(eps) + " is at most 1e-6");
  }
  return c;
}

// ---------------------------------------------------------------------
// Criteria 3 and 4: conservation behavior of the frozen planar field.

struct ConservationSeries {
  std::vector<double> t;
  std::vector<double> norm_dev;
  std::vector<double> energy_err;
};

ConservationSeries conservation_series(const FieldModel& field,
                                       const WavePacketState& s0,
                                       Integrator it, double tau,
                                       double t_end) {
  const long n = std::lround(t_end / tau);
  RunOutput run =
      run_trajectory(field, s0, it, tau, n, AveragesMode::Analytic, 10);
  if (run.failed) throw Error("conservation run failed: " + run.error);
  const AverageEngine engine(field, AveragesMode::Analytic);
  std::vector<DiagnosticsPoint> pts = diagnostics_series(run, engine);
  ConservationSeries out;
  const double e0 = pts.front().energy;
  for (const DiagnosticsPoint& p : pts) {
    out.t.push_back(p.t);
    out.norm_dev.push_back(std::abs(p.norm - 1.0));
    out.energy_err.push_back(std::abs(p.energy - e0));
  }
  return out;
}

double max_in_window(const ConservationSeries& s, double t0, double t1,
                     bool energy) {
  double worst = 0.0;
  for (size_t i = 0; i < s.t.size(); ++i)
    if (s.t[i] >= t0 && s.t[i] <= t1)
      worst = std::max(worst, energy ? s.energy_err[i] : s.norm_dev[i]);
  return worst;
}

void criteria_conservation(Criterion& c3, Criterion& c4) {
  c3.title = "norm conservation";
  c4.title = "energy behavior";

  TrigField2D field(0.0);
  const WavePacketState s0 = sublinear_initial(1e-3, field);
  const double T = 200.0;
  const std::vector<double> taus = {0.1, 0.05, 0.025, 0.0125};

  std::map<Integrator, std::vector<double>> energy_max;
  std::map<Integrator, ConservationSeries> coarse;
  for (Integrator it : {Integrator::Boris, Integrator::MRK4, Integrator::RK4}) {
    for (double tau : taus) {
      ConservationSeries s = conservation_series(field, s0, it, tau, T);
      energy_max[it].push_back(max_in_window(s, 0.0, T, true));
      if (tau == taus.front()) coarse[it] = std::move(s);
    }
  }

  const double norm_boris = max_in_window(coarse[Integrator::Boris], 0, T, false);
  const double norm_mrk4 = max_in_window(coarse[Integrator::MRK4], 0, T, false);
  const double norm_rk4 = max_in_window(coarse[Integrator::RK4], 0, T, false);
  c3.add(norm_boris <= 1e-11,
         "boris norm deviation " + num(norm_boris) + " at most 1e-11");
  c3.add(norm_mrk4 <= 1e-11,
         "mrk4 norm deviation " + num(norm_mrk4) + " at most 1e-11");
  c3.add(norm_rk4 >= 1e-8,
         "rk4 norm deviation " + num(norm_rk4) + " at least 1e-8");

  const double b_early = max_in_window(coarse[Integrator::Boris], 0, 100, true);
  const double b_late = max_in_window(coarse[Integrator::Boris], 100, T, true);
  c4.add(b_late <= 2.0 * b_early,
         "boris energy error does not drift: late max " + num(b_late) +
             " within 2x of early max " + num(b_early));

  const ConservationSeries& r = coarse[Integrator::RK4];
  const double r_final = r.energy_err.back();
  const double r_early = max_in_window(r, 0.0, 50.0, true);
  c4.add(r_final >= 2.0 * r_early,
         "rk4 energy error drifts: final " + num(r_final) +
             " at least 2x the early window max " + num(r_early));

  const double slope_b =
      convergence_slopes(taus, energy_max[Integrator::Boris]).lsq_slope;
  c4.add(in_band(slope_b, 1.8, 2.2),
         "boris energy error slope " + num(slope_b) + " in [1.8, 2.2]");
  const double slope_m =
      convergence_slopes(taus, energy_max[Integrator::MRK4]).lsq_slope;
  c4.add(in_band(slope_m, 3.7, 4.3),
         "mrk4 energy error slope " + num(slope_m) + " in [3.7, 4.3]");
  const double slope_r =
      convergence_slopes(taus, energy_max[Integrator::RK4]).lsq_slope;
  c4.add(in_band(slope_r, 3.7, 4.3),
         "rk4 energy error slope " + num(slope_r) + " in [3.7, 4.3]");
}

// ---------------------------------------------------------------------
// Criterion 5: the linear trap, where the reference is numerically exact.

Criterion criterion_trap() {
  Criterion c;
  c.title = "linear trap exactness";

  ExperimentSpec spec = preset_spec("penning-convergence");
  ExperimentResult res = run_experiment(spec, g_jobs);
  std::vector<SlopeRow> rows = experiment_slopes(res);
  const double eps = spec.eps_list[0];

  const std::vector<std::string> quantities = {"q", "p", "Q", "P", "zeta_R"};
  for (const std::string& qn : quantities) {
    const double sb = slope_of(rows, Integrator::Boris, eps, qn);
    c.add(in_band(sb, 1.8, 2.2),
          "boris " + qn + " slope " + num(sb) + " in [1.8, 2.2]");
  }
  for (Integrator it : {Integrator::MRK4, Integrator::RK4}) {
    for (const std::string& qn : quantities) {
      const double s = slope_of(rows, it, eps, qn);
      c.add(in_band(s, 3.7, 4.3), integrator_name(it) + " " + qn + " slope " +
                                      num(s) + " in [3.7, 4.3]");
    }
  }

  for (double tau : spec.taus) {
    const RunResult* r = find_run(res, Integrator::MRK4, eps, tau);
    const double zi = r ? r->errors.max_param.zeta_I : 1.0;
    const double qe = r ? r->errors.max_param.Q : 0.0;
    c.add(r != nullptr && zi <= 10.0 * qe,
          "mrk4 zeta_I error " + num(zi) + " at tau " + num(tau) +
              " within 10x of Q error " + num(qe));
  }

  // Width invariant of the shape-preserving initial data along the
  // numerically exact reference.
  PenningField3D field(spec.r_omega);
  const WavePacketState s0 = penning_coherent_initial(eps, field);
  const double target = std::exp(log_abs_det(s0.Q));
  const long nsteps = std::lround(2.0 * M_PI / spec.tau_ref);
  Reference ref = compute_reference(field, s0, "mrk4", spec.tau_ref, nsteps,
                                    100, AveragesMode::Point, 10);
  double worst = 0.0;
  for (const CanonicalState& rec : ref.records)
    worst = std::max(worst,
                     std::abs(std::exp(log_abs_det(rec.Q)) / target - 1.0));
  c.add(worst <= 1e-9, "reference width determinant deviation " + num(worst) +
                           " at most 1e-9");
  return c;
}

// ---------------------------------------------------------------------
// Criterion 6: identity suites.

Cplx plane_wave(const Vec& k, double phase, const Vec& x) {
  return std::exp(Cplx(0.0, k.dot(x) + phase));
}

double gaussian_calculus_worst(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  const double eps_values[3] = {1.0, 0.25, 0.05};
  double worst = 0.0;

  for (int trial = 0; trial < 10; ++trial) {
    const int d = (trial % 2 == 0) ? 2 : 3;
    const double eps = eps_values[trial % 3];
    const WavePacketState s = random_symplectic_state(d, eps, rng);
    const QuadratureRule rule = packet_quadrature(s, 24);
    const int n = static_cast<int>(rule.weights.size());
    const Mat CIinv = (s.Q * s.Q.adjoint()).real();

    Vec k(d);
    for (int i = 0; i < d; ++i) k(i) = uni(rng);
    const double phase = uni(rng);
    Mat Mraw(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) Mraw(i, j) = uni(rng);
    const Mat M = 0.5 * (Mraw + Mraw.transpose());
    std::vector<Vec> kw(d, Vec(d));
    std::vector<double> cw(d);
    for (int m = 0; m < d; ++m) {
      for (int i = 0; i < d; ++i) kw[m](i) = uni(rng);
      cw[m] = uni(rng);
    }

    Cplx mean_w = 0.0;
    Cplx mean_quad = 0.0;
    CVec mean_wdx = CVec::Zero(d);
    CVec mean_grad = CVec::Zero(d);
    CMat mean_hess = CMat::Zero(d, d);
    CMat mean_outer = CMat::Zero(d, d);
    CMat mean_JW = CMat::Zero(d, d);
    for (int j = 0; j < n; ++j) {
      const Vec x = rule.nodes.col(j);
      const Vec dx = x - s.q;
      const double wgt = rule.weights(j);
      const Cplx w = plane_wave(k, phase, x);
      mean_w += wgt * w;
      mean_quad += wgt * w * dx.dot(M * dx);
      mean_wdx += (wgt * w) * dx.cast<Cplx>();
      mean_grad += (wgt * w * Cplx(0.0, 1.0)) * k.cast<Cplx>();
      mean_hess += (-wgt * w) * (k * k.transpose()).cast<Cplx>();
      for (int m = 0; m < d; ++m) {
        const Cplx wm = plane_wave(kw[m], cw[m], x);
        for (int l = 0; l < d; ++l) {
          mean_outer(m, l) += wgt * wm * dx(l);
          mean_JW(m, l) += wgt * wm * Cplx(0.0, kw[m](l));
        }
      }
    }

    // First moment of w against the centered Gaussian.
    const CVec rhs1 = 0.5 * s.eps * (CIinv.cast<Cplx>() * mean_grad);
    worst = std::max(worst,
                     (mean_wdx - rhs1).norm() / std::max(1.0, mean_wdx.norm()));

    // Quadratic moment of w.
    const Cplx rhs2 =
        0.5 * s.eps * mean_w * (M * CIinv).trace() +
        0.25 * s.eps * s.eps *
            (mean_hess * (CIinv * M * CIinv).cast<Cplx>()).trace();
    worst = std::max(worst,
                     std::abs(mean_quad - rhs2) / std::max(1.0, std::abs(mean_quad)));

    // Componentwise moments of a vector observable.
    const CMat rhs3 = 0.5 * s.eps * (mean_JW * CIinv.cast<Cplx>());
    worst = std::max(worst, (mean_outer - rhs3).norm() /
                                std::max(1.0, mean_outer.norm()));
  }
  return worst;
}

double ehrenfest_worst(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const TrigField2D field(1.0);
  const AverageEngine engine(field, AveragesMode::Analytic);
  const WavePacketState s0 = sublinear_initial(1e-2, field);

  Vec k(2);
  k << 1.2 + 0.1 * uni(rng), -0.7 + 0.1 * uni(rng);
  const double cph = 0.3 * uni(rng);
  Mat Mraw(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) Mraw(i, j) = uni(rng);
  const Mat M = 0.5 * (Mraw + Mraw.transpose());
  Vec b(2);
  b << uni(rng), uni(rng);

  auto averages = [&](const WavePacketState& s, double& w_sin, Vec& g_sin,
                      Mat& h_sin, double& w_poly) {
    const QuadratureRule rule = packet_quadrature(s, 16);
    const int n = static_cast<int>(rule.weights.size());
    double mass = 0.0;
    w_sin = 0.0;
    w_poly = 0.0;
    g_sin = Vec::Zero(2);
    h_sin = Mat::Zero(2, 2);
    for (int j = 0; j < n; ++j) {
      const Vec x = rule.nodes.col(j);
      const double wgt = rule.weights(j);
      const double arg = k.dot(x) + cph;
      mass += wgt;
      w_sin += wgt * std::sin(arg);
      g_sin += wgt * std::cos(arg) * k;
      h_sin -= wgt * std::sin(arg) * (k * k.transpose());
      w_poly += wgt * (0.5 * x.dot(M * x) + b.dot(x));
    }
    w_sin /= mass;
    g_sin /= mass;
    h_sin /= mass;
    w_poly /= mass;
  };

  const double tau = 2e-4;
  WavePacketState s = s0;
  for (int i = 0; i < 99; ++i) s = mrk4_step(s, engine, tau);
  const WavePacketState sm = s;
  const WavePacketState sc = mrk4_step(sm, engine, tau);
  const WavePacketState sp = mrk4_step(sc, engine, tau);

  double wm_sin, wc_sin, wp_sin, wm_poly, wc_poly, wp_poly;
  Vec g(2);
  Mat h(2, 2);
  averages(sm, wm_sin, g, h, wm_poly);
  averages(sp, wp_sin, g, h, wp_poly);
  averages(sc, wc_sin, g, h, wc_poly);

  const double fd_sin = (wp_sin - wm_sin) / (2.0 * tau);
  double worst =
      std::abs(fd_sin - ehrenfest_rhs(sc, g, h)) / std::max(1.0, std::abs(fd_sin));

  const Vec g_poly = M * sc.q + b;
  const double fd_poly = (wp_poly - wm_poly) / (2.0 * tau);
  worst = std::max(worst, std::abs(fd_poly - ehrenfest_rhs(sc, g_poly, M)) /
                              std::max(1.0, std::abs(fd_poly)));
  return worst;
}

double cross_formulation_worst() {
  const TrigField2D field(1.0);
  const AverageEngine engine(field, AveragesMode::Analytic);
  const WavePacketState s0 = sublinear_initial(1e-3, field);
  const double tau = 1e-4;
  const long nsteps = 80000;

  WavePacketState s = s0;
  for (long k = 0; k < nsteps; ++k) s = mrk4_step(s, engine, tau);

  const FieldAverages fa0 = engine.field_averages(s0);
  CanonicalState c = to_canonical(s0, fa0.A, fa0.JA);
  for (long k = 0; k < nsteps; ++k) c = rk4_step(c, engine, tau);

  const FieldAverages fa = engine.field_averages(s);
  return parameter_errors(to_canonical(s, fa.A, fa.JA), c).max();
}

double symplecticity_worst() {
  const TrigField2D field(1.0);
  const AverageEngine engine(field, AveragesMode::Analytic);
  const WavePacketState s0 = sublinear_initial(1e-3, field);
  const double tau = 1e-4;
  const long nsteps = 80000;
  double worst = 0.0;

  WavePacketState s = s0;
  for (long k = 0; k < nsteps; ++k) {
    s = mrk4_step(s, engine, tau);
    if (k % 50 != 49) continue;
    const FieldAverages fa = engine.field_averages(s);
    const CMat P = s.Ups + fa.JA.cast<Cplx>() * s.Q;
    const SymplecticityResidual r = symplecticity_residual(s.Q, P);
    worst = std::max({worst, r.r1, r.r2});
  }

  const FieldAverages fa0 = engine.field_averages(s0);
  CanonicalState c = to_canonical(s0, fa0.A, fa0.JA);
  for (long k = 0; k < nsteps; ++k) {
    c = rk4_step(c, engine, tau);
    if (k % 50 != 49) continue;
    const SymplecticityResidual r = symplecticity_residual(c.Q, c.P);
    worst = std::max({worst, r.r1, r.r2});
  }
  return worst;
}

double boris_rotation_worst(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> utau(1e-3, 0.2);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = (trial % 2 == 0) ? 2 : 3;
    Vec v(d);
    for (int i = 0; i < d; ++i) v(i) = gauss(rng);
    Vec B3 = Vec::Zero(3);
    if (d == 2) {
      B3(2) = 2.0 * gauss(rng);
    } else {
      for (int i = 0; i < 3; ++i) B3(i) = 2.0 * gauss(rng);
    }
    const double tau = utau(rng);
    const Vec vp = boris_rotate(v, B3, tau);
    const Vec residual = vp - v - 0.5 * tau * cross_B(Vec(vp + v), B3);
    const double scale = std::max(1.0, v.norm());
    worst = std::max({worst, residual.norm() / scale,
                      std::abs(vp.norm() - v.norm()) / scale});
  }
  return worst;
}

Criterion criterion_identities() {
  Criterion c;
  c.title = "identity suites";
  const unsigned seed = 20240817u;

  const double g = gaussian_calculus_worst(seed);
  c.add(g <= 1e-8, "gaussian moment identities worst " + num(g) +
                       " at most 1e-8 over 10 random states");
  const double e = ehrenfest_worst(seed);
  c.add(e <= 1e-6,
        "observable derivative finite difference worst " + num(e) +
            " at most 1e-6");
  const double x = cross_formulation_worst();
  c.add(x <= 1e-8, "transformed versus canonical trajectory gap " + num(x) +
                       " at most 1e-8");
  const double b = boris_rotation_worst(seed);
  c.add(b <= 1e-13,
        "rotation implicit relation residual " + num(b) + " at most 1e-13");
  const double s = symplecticity_worst();
  c.add(s <= 1e-6,
        "pairing residual growth " + num(s) + " at most 1e-6 over T = 8");
  return c;
}

// ---------------------------------------------------------------------
// Criterion 7: physical trap scaling.

std::string sig(double x, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

Criterion criterion_scaling() {
  Criterion c;
  c.title = "trap scaling";
  const PenningScalingResult r = penning_scaling(proton_trap());

  auto check4 = [&](double value, double target, const std::string& label) {
    const bool ok = sig(value, 4) == sig(target, 4);
    c.add(ok, label + " " + sig(value, 4) + " matches " + sig(target, 4) +
                  " to 4 significant figures");
  };
  auto check3 = [&](double value, double target, const std::string& label) {
    const bool ok = sig(value, 3) == sig(target, 3);
    c.add(ok, label + " " + sig(value, 3) + " matches " + sig(target, 3) +
                  " to 3 significant figures");
  };

  check4(r.nu_plus / 1e6, 76.299, "modified cyclotron frequency in MHz");
  check4(r.nu_3 / 1e6, 10.134, "axial frequency in MHz");
  check4(r.nu_minus / 1e3, 672.93, "magnetron frequency in kHz");
  check3(r.eps, 1.19e-8, "semiclassical parameter");
  check3(r.ratio_omega, 113.25, "frequency ratio");
  check3(r.ratio_B, 114.25, "field ratio");
  return c;
}

void report(int index, const Criterion& c, int& failures) {
  const bool ok = c.pass();
  if (!ok) ++failures;
  std::printf("criterion %d (%s): %s\n", index, c.title.c_str(),
              ok ? "PASS" : "FAIL");
  for (const Clause& clause : c.clauses)
    std::printf("    [%s] %s\n", clause.pass ? "ok" : "FAIL",
                clause.text.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  const unsigned hw = std::thread::hardware_concurrency();
  g_jobs = hw == 0 ? 2 : static_cast<int>(std::min(hw, 8u));

  int failures = 0;
  try {
    report(1, criterion_convergence(), failures);
    report(2, criterion_l2(), failures);
    Criterion c3, c4;
    criteria_conservation(c3, c4);
    report(3, c3, failures);
    report(4, c4, failures);
    report(5, criterion_trap(), failures);
    report(6, criterion_identities(), failures);
    report(7, criterion_scaling(), failures);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 99;
  }

  std::printf("%d of 7 criteria passed\n", 7 - failures);
  return failures == 0 ? 0 : 1;
}
