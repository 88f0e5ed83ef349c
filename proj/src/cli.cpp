#include "gwp/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "gwp/eom.hpp"
#include "gwp/io.hpp"
#include "gwp/scenarios.hpp"

namespace gwp {

namespace {

std::string resolve_out_dir(const std::string& flag) {
  std::string dir = flag;
  if (dir.empty()) {
    const char* env = std::getenv("GWP_OUT_DIR");
    if (env != nullptr && env[0] != '\0') dir = env;
  }
  if (dir.empty()) dir = ".";
  std::filesystem::create_directories(dir);
  return dir;
}

ExperimentSpec load_spec(const std::string& config_path,
                         const std::string& preset) {
  if (!config_path.empty()) return spec_from_json(read_text_file(config_path));
  return preset_spec(preset);
}

struct SuiteResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;
  double tol = 0.0;
};

void print_suite(const SuiteResult& r) {
  std::cout << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " (worst "
            << format_double(r.worst) << ", tol " << format_double(r.tol)
            << ")\n";
}

Cplx plane_wave(const Vec& k, double phase, const Vec& x) {
  return std::exp(Cplx(0.0, k.dot(x) + phase));
}

SuiteResult check_gaussian_calculus(unsigned seed) {
  SuiteResult result{"gaussian-calculus", false, 0.0, 1e-8};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.5, 1.5);
  const double eps_values[3] = {1.0, 0.25, 0.05};

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

    const CVec rhs1 = 0.5 * s.eps * (CIinv.cast<Cplx>() * mean_grad);
    const double e1 =
        (mean_wdx - rhs1).norm() / std::max(1.0, mean_wdx.norm());

    const Cplx rhs2 =
        0.5 * s.eps * mean_w * (M * CIinv).trace() +
        0.25 * s.eps * s.eps *
            (mean_hess * (CIinv * M * CIinv).cast<Cplx>()).trace();
    const double e2 = std::abs(mean_quad - rhs2) /
                      std::max(1.0, std::abs(mean_quad));

    const CMat rhs3 = 0.5 * s.eps * (mean_JW * CIinv.cast<Cplx>());
    const double e3 =
        (mean_outer - rhs3).norm() / std::max(1.0, mean_outer.norm());

    result.worst = std::max({result.worst, e1, e2, e3});
  }
  result.pass = result.worst <= result.tol;
  return result;
}

SuiteResult check_ehrenfest(unsigned seed) {
  SuiteResult result{"ehrenfest", false, 0.0, 1e-6};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  const TrigField2D field(1.0);
  const AverageEngine engine(field, AveragesMode::Analytic);
  const WavePacketState s0 = sublinear_initial(1e-2, field);

  Vec k(2);
  k << 1.2 + 0.1 * uni(rng), -0.7 + 0.1 * uni(rng);
  const double c = 0.3 * uni(rng);
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
      const double arg = k.dot(x) + c;
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
  const double rhs_sin = ehrenfest_rhs(sc, g, h);
  result.worst = std::abs(fd_sin - rhs_sin) / std::max(1.0, std::abs(fd_sin));

  const Vec g_poly = M * sc.q + b;
  const double fd_poly = (wp_poly - wm_poly) / (2.0 * tau);
  const double rhs_poly = ehrenfest_rhs(sc, g_poly, M);
  result.worst = std::max(result.worst, std::abs(fd_poly - rhs_poly) /
                                            std::max(1.0, std::abs(fd_poly)));
  result.pass = result.worst <= result.tol;
  return result;
}

// Residual growth of the reconstructed (Q, P) pairing along fine-step
// reference trajectories.
SuiteResult check_symplecticity() {
  SuiteResult result{"symplecticity", false, 0.0, 1e-6};
  const TrigField2D field(1.0);
  const AverageEngine engine(field, AveragesMode::Analytic);
  const WavePacketState s0 = sublinear_initial(1e-3, field);
  const double tau = 1e-4;
  const long nsteps = 80000;

  WavePacketState s = s0;
  for (long k = 0; k < nsteps; ++k) {
    s = mrk4_step(s, engine, tau);
    if (k % 50 != 49) continue;
    const FieldAverages fa = engine.field_averages(s);
    const CMat P = s.Ups + fa.JA.cast<Cplx>() * s.Q;
    const SymplecticityResidual r = symplecticity_residual(s.Q, P);
    result.worst = std::max({result.worst, r.r1, r.r2});
  }

  const FieldAverages fa0 = engine.field_averages(s0);
  CanonicalState c = to_canonical(s0, fa0.A, fa0.JA);
  for (long k = 0; k < nsteps; ++k) {
    c = rk4_step(c, engine, tau);
    if (k % 50 != 49) continue;
    const SymplecticityResidual r = symplecticity_residual(c.Q, c.P);
    result.worst = std::max({result.worst, r.r1, r.r2});
  }
  result.pass = result.worst <= result.tol;
  return result;
}

SuiteResult check_boris_rotation(unsigned seed) {
  SuiteResult result{"boris-rotation", false, 0.0, 1e-13};
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> utau(1e-3, 0.2);
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
    const double r = residual.norm() / scale;
    const double nd = std::abs(vp.norm() - v.norm()) / scale;
    result.worst = std::max({result.worst, r, nd});
  }
  result.pass = result.worst <= result.tol;
  return result;
}

int cmd_check(const std::string& suite, unsigned seed) {
  std::vector<SuiteResult> results;
  if (suite == "gaussian-calculus" || suite == "all")
    results.push_back(check_gaussian_calculus(seed));
  if (suite == "ehrenfest" || suite == "all")
    results.push_back(check_ehrenfest(seed));
  if (suite == "symplecticity" || suite == "all")
    results.push_back(check_symplecticity());
  if (suite == "boris-rotation" || suite == "all")
    results.push_back(check_boris_rotation(seed));
  if (results.empty()) throw ValidationError("unknown suite: " + suite);
  bool all_pass = true;
  for (const SuiteResult& r : results) {
    print_suite(r);
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 2;
}

int cmd_simulate(const ExperimentSpec& spec, const std::string& integrator,
                 double eps_flag, double tau_flag, double t_end_flag,
                 const std::string& out_flag, const std::string& out_dir) {
  ExperimentSpec run_spec = spec;
  const double eps = eps_flag > 0.0 ? eps_flag : run_spec.eps_list.front();
  const double tau = tau_flag > 0.0 ? tau_flag : run_spec.taus.front();
  const double t_end = t_end_flag > 0.0 ? t_end_flag : run_spec.t_end;
  const Integrator it = integrator_from_string(integrator);

  const std::shared_ptr<FieldModel> field = make_field(run_spec);
  const WavePacketState s0 = make_initial(run_spec, eps, *field);
  const long nsteps = std::llround(t_end / tau);
  const RunOutput run = run_trajectory(*field, s0, it, tau, nsteps,
                                       run_spec.mode, run_spec.quad_order);
  if (run.failed) {
    std::cerr << "simulation failed: " << run.error << "\n";
    return 2;
  }
  const AverageEngine engine(*field, run_spec.mode, run_spec.quad_order);
  std::string path = out_flag;
  if (path.empty())
    path = resolve_out_dir(out_dir) + "/simulate_" + integrator_name(it) +
           "_tau" + format_double(tau) + ".csv";
  emit_csv(run.records, engine, path);

  const Diagnostics g = diagnostics(run.records.back(), engine);
  std::cout << "steps=" << nsteps << " t_end=" << format_double(t_end)
            << " eps=" << format_double(eps) << "\n"
            << "final: norm=" << format_double(g.norm)
            << " energy=" << format_double(g.energy)
            << " sympl_r1=" << format_double(g.sympl_r1)
            << " sympl_r2=" << format_double(g.sympl_r2) << "\n"
            << "wrote " << run.records.size() << " records to " << path
            << "\n";
  return 0;
}

int cmd_converge(ExperimentSpec spec, const std::string& integrator,
                 int jobs, const std::string& out_flag,
                 const std::string& out_dir) {
  if (!integrator.empty())
    spec.integrators = {integrator_from_string(integrator)};
  const ExperimentResult result = run_experiment(spec, jobs);

  std::string path = out_flag;
  if (path.empty())
    path = resolve_out_dir(out_dir) + "/" +
           (spec.preset.empty() ? std::string("experiment") : spec.preset) +
           "_summary.json";
  write_text_file(path, summary_to_json(result));

  for (const RunResult& r : result.runs) {
    std::cout << integrator_name(r.integrator)
              << " eps=" << format_double(r.eps)
              << " tau=" << format_double(r.tau);
    if (r.failed) {
      std::cout << " FAILED: " << r.error << "\n";
      continue;
    }
    std::cout << " max_q=" << format_double(r.errors.max_param.q)
              << " max_p=" << format_double(r.errors.max_param.p)
              << " max_Q=" << format_double(r.errors.max_param.Q)
              << " max_P=" << format_double(r.errors.max_param.P);
    if (spec.with_l2)
      std::cout << " l2_max=" << format_double(r.errors.l2_max);
    std::cout << "\n";
  }
  for (const SlopeRow& row : experiment_slopes(result)) {
    std::cout << "slope " << integrator_name(row.integrator)
              << " eps=" << format_double(row.eps) << " " << row.quantity
              << " lsq=" << format_double(row.analysis.lsq_slope)
              << " points=" << row.analysis.used_count << "\n";
  }
  std::cout << "wrote summary to " << path << "\n";
  bool any_failed = false;
  for (const RunResult& r : result.runs) any_failed = any_failed || r.failed;
  return any_failed ? 2 : 0;
}

int cmd_energy(const ExperimentSpec& spec, bool write_csv,
               const std::string& out_dir) {
  const std::shared_ptr<FieldModel> field = make_field(spec);
  const AverageEngine engine(*field, spec.mode, spec.quad_order);
  bool any_failed = false;
  for (double eps : spec.eps_list) {
    const WavePacketState s0 = make_initial(spec, eps, *field);
    for (double tau : spec.taus) {
      for (Integrator it : spec.integrators) {
        const long nsteps = std::llround(spec.t_end / tau);
        const RunOutput run = run_trajectory(*field, s0, it, tau, nsteps,
                                             spec.mode, spec.quad_order);
        std::cout << integrator_name(it) << " eps=" << format_double(eps)
                  << " tau=" << format_double(tau);
        if (run.failed) {
          std::cout << " FAILED: " << run.error << "\n";
          any_failed = true;
          continue;
        }
        const std::vector<DiagnosticsPoint> series =
            diagnostics_series(run, engine);
        const double e0 = series.front().energy;
        const double n0 = series.front().norm;
        double max_e = 0.0, max_n = 0.0;
        for (const DiagnosticsPoint& p : series) {
          max_e = std::max(max_e, std::abs(p.energy - e0) /
                                      std::max(1e-300, std::abs(e0)));
          max_n = std::max(max_n,
                           std::abs(p.norm - n0) / std::max(1e-300, n0));
        }
        const double final_e = std::abs(series.back().energy - e0) /
                               std::max(1e-300, std::abs(e0));
        std::cout << " max_energy_rel=" << format_double(max_e)
                  << " final_energy_rel=" << format_double(final_e)
                  << " max_norm_rel=" << format_double(max_n) << "\n";
        if (write_csv) {
          const std::string path = resolve_out_dir(out_dir) + "/energy_" +
                                   integrator_name(it) + "_tau" +
                                   format_double(tau) + ".csv";
          emit_csv(run.records, engine, path);
        }
      }
    }
  }
  return any_failed ? 2 : 0;
}

int cmd_penning_scale(const std::string& species, const TrapParameters& custom,
                      bool use_custom, const std::string& out_flag) {
  TrapParameters trap;
  if (use_custom) {
    trap = custom;
  } else if (species == "proton") {
    trap = proton_trap();
  } else if (species == "electron") {
    trap = electron_trap();
  } else {
    throw ValidationError("unknown species: " + species);
  }
  const PenningScalingResult r = penning_scaling(trap);
  std::cout << "omega_c     = " << format_double(r.omega_c) << " rad/s\n"
            << "omega_3     = " << format_double(r.omega_3) << " rad/s\n"
            << "Omega       = " << format_double(r.Omega) << " rad/s\n"
            << "omega_plus  = " << format_double(r.omega_plus) << " rad/s\n"
            << "omega_minus = " << format_double(r.omega_minus) << " rad/s\n"
            << "nu_plus     = " << format_double(r.nu_plus * 1e-6) << " MHz\n"
            << "nu_3        = " << format_double(r.nu_3 * 1e-6) << " MHz\n"
            << "nu_minus    = " << format_double(r.nu_minus * 1e-3) << " kHz\n"
            << "eps         = " << format_double(r.eps) << "\n"
            << "omega_plus/omega_minus = " << format_double(r.ratio_omega)
            << "\n"
            << "omega_c/omega_minus    = " << format_double(r.ratio_B)
            << "\n";
  if (!out_flag.empty()) write_text_file(out_flag, scaling_to_json(trap, r));
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Semiclassical Gaussian wave packets in magnetic fields"};
  app.require_subcommand(1);
  int exit_code = 0;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one trajectory, write CSV");
  std::string sim_preset = "sublinear-convergence";
  std::string sim_config, sim_integrator = "boris", sim_out, sim_out_dir;
  double sim_eps = 0.0, sim_tau = 0.0, sim_t_end = 0.0;
  sim->add_option("--preset", sim_preset, "Named scenario preset");
  sim->add_option("--config", sim_config, "JSON config file");
  sim->add_option("--integrator", sim_integrator, "boris|mrk4|rk4");
  sim->add_option("--eps", sim_eps, "Semiclassical parameter override");
  sim->add_option("--tau", sim_tau, "Step size override");
  sim->add_option("--t-end", sim_t_end, "Final time override");
  sim->add_option("--out", sim_out, "Output CSV path");
  sim->add_option("--out-dir", sim_out_dir, "Output directory");
  sim->callback([&]() {
    exit_code = cmd_simulate(load_spec(sim_config, sim_preset), sim_integrator,
                             sim_eps, sim_tau, sim_t_end, sim_out,
                             sim_out_dir);
  });

  // converge
  auto* conv =
      app.add_subcommand("converge", "Convergence study over a tau grid");
  std::string conv_preset = "sublinear-convergence";
  std::string conv_config, conv_integrator, conv_out, conv_out_dir;
  int conv_jobs = 1;
  conv->add_option("--preset", conv_preset, "Named scenario preset");
  conv->add_option("--config", conv_config, "JSON config file");
  conv->add_option("--integrator", conv_integrator,
                   "Restrict to one integrator");
  conv->add_option("--jobs", conv_jobs, "Parallel grid cells (default 1)");
  conv->add_option("--out", conv_out, "Summary JSON path");
  conv->add_option("--out-dir", conv_out_dir, "Output directory");
  conv->callback([&]() {
    exit_code = cmd_converge(load_spec(conv_config, conv_preset),
                             conv_integrator, conv_jobs, conv_out,
                             conv_out_dir);
  });

  // energy
  auto* en = app.add_subcommand("energy", "Long-horizon drift study");
  std::string en_preset = "sublinear-energy";
  std::string en_config, en_out_dir;
  bool en_csv = false;
  en->add_option("--preset", en_preset, "Named scenario preset");
  en->add_option("--config", en_config, "JSON config file");
  en->add_flag("--emit-csv", en_csv, "Write per-step CSV per run");
  en->add_option("--out-dir", en_out_dir, "Output directory");
  en->callback([&]() {
    exit_code = cmd_energy(load_spec(en_config, en_preset), en_csv,
                           en_out_dir);
  });

  // check
  auto* chk = app.add_subcommand("check", "Identity and property suites");
  std::string chk_suite = "all";
  unsigned chk_seed = 7;
  chk->add_option("--suite", chk_suite,
                  "gaussian-calculus|ehrenfest|symplecticity|boris-rotation|"
                  "all");
  chk->add_option("--seed", chk_seed, "Random seed");
  chk->callback([&]() { exit_code = cmd_check(chk_suite, chk_seed); });

  // penning-scale
  auto* pen = app.add_subcommand("penning-scale",
                                 "Dimensionless trap parameters from SI data");
  std::string pen_species = "proton";
  std::string pen_out;
  TrapParameters pen_custom;
  pen->add_option("--species", pen_species, "proton|electron");
  auto* pm = pen->add_option("--mass-kg", pen_custom.mass_kg, "Particle mass");
  auto* pb =
      pen->add_option("--b0-tesla", pen_custom.B0_tesla, "Magnetic field");
  auto* pp =
      pen->add_option("--phi0-volts", pen_custom.phi0_volts, "Trap voltage");
  auto* pd =
      pen->add_option("--delta-m", pen_custom.delta_m, "Trap length scale");
  pen->add_option("--out", pen_out, "Write JSON to this path");
  pen->callback([&]() {
    const bool use_custom =
        pm->count() > 0 || pb->count() > 0 || pp->count() > 0 ||
        pd->count() > 0;
    exit_code = cmd_penning_scale(pen_species, pen_custom, use_custom,
                                  pen_out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const DimensionError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

}  // namespace gwp
