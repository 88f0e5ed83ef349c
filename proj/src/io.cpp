#include "gwp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gwp {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  while (first != last && (*first == ' ' || *first == '\t')) ++first;
  const auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc())
    throw ValidationError("cannot parse number: '" + text + "'");
  return value;
}

std::string averages_mode_name(AveragesMode mode) {
  switch (mode) {
    case AveragesMode::Auto: return "auto";
    case AveragesMode::Quadrature: return "quadrature";
    case AveragesMode::Analytic: return "analytic";
    case AveragesMode::Point: return "point";
  }
  throw ValidationError("unknown averages mode");
}

AveragesMode averages_mode_from_string(const std::string& name) {
  if (name == "auto") return AveragesMode::Auto;
  if (name == "quadrature") return AveragesMode::Quadrature;
  if (name == "analytic") return AveragesMode::Analytic;
  if (name == "point") return AveragesMode::Point;
  throw ValidationError("unknown averages mode: " + name);
}

std::vector<std::string> csv_columns(int dim) {
  std::vector<std::string> cols;
  cols.push_back("t");
  auto vec_block = [&](const std::string& stem) {
    for (int i = 0; i < dim; ++i) cols.push_back(stem + std::to_string(i));
  };
  auto mat_block = [&](const std::string& stem) {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        cols.push_back(stem + std::to_string(i) + std::to_string(j));
  };
  vec_block("q");
  vec_block("v");
  mat_block("ReQ");
  mat_block("ImQ");
  mat_block("ReUps");
  mat_block("ImUps");
  cols.push_back("zeta_R");
  cols.push_back("zeta_I");
  cols.push_back("norm");
  cols.push_back("energy");
  cols.push_back("energy_err_abs");
  cols.push_back("energy_err_rel");
  cols.push_back("sympl_r1");
  cols.push_back("sympl_r2");
  cols.push_back("det_Q_abs");
  return cols;
}

std::string render_csv(const std::vector<WavePacketState>& records,
                       const AverageEngine& engine) {
  const int dim = records.empty() ? 0 : records.front().dim();
  const std::vector<std::string> cols = csv_columns(dim);
  std::string out;
  for (size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';

  double energy0 = 0.0;
  bool have_energy0 = false;
  for (const WavePacketState& s : records) {
    const Diagnostics g = diagnostics(s, engine);
    if (!have_energy0) {
      energy0 = g.energy;
      have_energy0 = true;
    }
    const double err_abs = std::abs(g.energy - energy0);
    const double err_rel =
        energy0 != 0.0 ? err_abs / std::abs(energy0) : err_abs;

    std::vector<double> row;
    row.reserve(cols.size());
    row.push_back(s.t);
    for (int i = 0; i < dim; ++i) row.push_back(s.q(i));
    for (int i = 0; i < dim; ++i) row.push_back(s.v(i));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) row.push_back(s.Q(i, j).real());
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) row.push_back(s.Q(i, j).imag());
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) row.push_back(s.Ups(i, j).real());
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) row.push_back(s.Ups(i, j).imag());
    row.push_back(s.zeta_R);
    row.push_back(s.zeta_I);
    row.push_back(g.norm);
    row.push_back(g.energy);
    row.push_back(err_abs);
    row.push_back(err_rel);
    row.push_back(g.sympl_r1);
    row.push_back(g.sympl_r2);
    row.push_back(g.det_Q_abs);

    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void emit_csv(const std::vector<WavePacketState>& records,
              const AverageEngine& engine, const std::string& path) {
  write_text_file(path, render_csv(records, engine));
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream stream(text);
  std::string line;
  bool header = true;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    size_t start = 0;
    while (true) {
      const size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (header) {
      table.columns = cells;
      header = false;
      continue;
    }
    if (cells.size() != table.columns.size())
      throw ValidationError("csv row width does not match header");
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& cell : cells) row.push_back(parse_double(cell));
    table.rows.push_back(std::move(row));
  }
  return table;
}

SlopeAnalysis convergence_slopes(const std::vector<double>& taus,
                                 const std::vector<double>& errors) {
  if (taus.size() != errors.size())
    throw ValidationError("taus and errors must have equal length");
  if (taus.size() < 2)
    throw ValidationError("at least two step sizes are required");
  for (size_t i = 1; i < taus.size(); ++i)
    if (taus[i] >= taus[i - 1])
      throw ValidationError("taus must be strictly decreasing");

  SlopeAnalysis out;
  const size_t n = taus.size();
  out.pairwise.resize(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    SlopePair& pair = out.pairwise[i];
    pair.tau_coarse = taus[i];
    pair.tau_fine = taus[i + 1];
    if (!(errors[i] > 0.0) || !(errors[i + 1] > 0.0)) {
      pair.slope = std::numeric_limits<double>::quiet_NaN();
      pair.flagged = true;
      pair.flag_reason = "nonpositive error";
    } else if (errors[i] == errors[i + 1]) {
      pair.slope = 0.0;
      pair.flagged = true;
      pair.flag_reason = "equal errors";
    } else {
      pair.slope = std::log(errors[i] / errors[i + 1]) /
                   std::log(taus[i] / taus[i + 1]);
    }
  }

  // Saturation shows up as depressed slopes at the large-tau end; error
  // floors (reference accuracy, arithmetic noise) depress the slopes at the
  // smallest-tau end. Both are flagged by the same test: an end pair whose
  // slope falls more than 0.5 below the best slope among the remaining
  // pairs is not in the asymptotic regime. The fit runs over the
  // contiguous interior that survives.
  size_t lo = 0;
  size_t hi = out.pairwise.size();
  auto best_excluding = [&](size_t skip) {
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = lo; i < hi; ++i)
      if (i != skip) best = std::max(best, out.pairwise[i].slope);
    return best;
  };
  auto end_flagged = [&](size_t idx) {
    const SlopePair& p = out.pairwise[idx];
    if (p.flagged) return true;
    if (!(p.slope >= 1.0)) return true;
    if (hi - lo >= 2 && p.slope < best_excluding(idx) - 0.5) return true;
    return false;
  };
  bool progress = true;
  while (progress && lo < hi) {
    progress = false;
    if (end_flagged(lo)) {
      if (!out.pairwise[lo].flagged) {
        out.pairwise[lo].flagged = true;
        out.pairwise[lo].flag_reason = "plateau";
      }
      ++lo;
      progress = true;
      continue;
    }
    if (hi > lo && end_flagged(hi - 1)) {
      if (!out.pairwise[hi - 1].flagged) {
        out.pairwise[hi - 1].flagged = true;
        out.pairwise[hi - 1].flag_reason = "floor-limited";
      }
      --hi;
      progress = true;
    }
  }

  if (hi == lo) {
    out.lsq_slope = std::numeric_limits<double>::quiet_NaN();
    out.used_first = 0;
    out.used_count = 0;
    return out;
  }

  const size_t first = lo;
  const size_t last = hi;  // pairs [lo, hi) use points [lo, hi]
  double sx = 0.0, sy = 0.0;
  const size_t count = last - first + 1;
  for (size_t i = first; i <= last; ++i) {
    sx += std::log(taus[i]);
    sy += std::log(errors[i]);
  }
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = first; i <= last; ++i) {
    const double dx = std::log(taus[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(errors[i]) - my);
  }
  out.lsq_slope = sxy / sxx;
  out.used_first = static_cast<int>(first);
  out.used_count = static_cast<int>(count);
  return out;
}

namespace {

json spec_to_json_obj(const ExperimentSpec& spec) {
  json j;
  j["preset"] = spec.preset;
  j["field"] = {{"kind", spec.field_kind},
                {"alpha", spec.alpha},
                {"r_omega", spec.r_omega}};
  j["eps"] = spec.eps_list;
  j["taus"] = spec.taus;
  j["t_end"] = spec.t_end;
  json names = json::array();
  for (Integrator it : spec.integrators) names.push_back(integrator_name(it));
  j["integrators"] = names;
  j["reference"] = {{"integrator", spec.reference_integrator},
                    {"tau_ref", spec.tau_ref}};
  j["averages"] = {{"mode", averages_mode_name(spec.mode)},
                   {"quad_order", spec.quad_order}};
  j["l2"] = {{"enabled", spec.with_l2}, {"order", spec.l2_order}};
  j["penning_coherent"] = spec.penning_coherent;
  return j;
}

void validate_spec(const ExperimentSpec& spec) {
  if (spec.eps_list.empty()) throw ValidationError("eps list is empty");
  if (spec.taus.empty()) throw ValidationError("tau list is empty");
  if (spec.integrators.empty())
    throw ValidationError("integrator list is empty");
  for (double eps : spec.eps_list)
    if (!(eps > 0.0)) throw ValidationError("eps must be positive");
  for (size_t i = 0; i < spec.taus.size(); ++i) {
    if (!(spec.taus[i] > 0.0)) throw ValidationError("tau must be positive");
    if (i > 0 && spec.taus[i] >= spec.taus[i - 1])
      throw ValidationError("taus must be strictly decreasing");
  }
  if (!(spec.t_end > 0.0)) throw ValidationError("t_end must be positive");
  if (spec.reference_integrator != "none" && !(spec.tau_ref > 0.0))
    throw ValidationError("tau_ref must be positive");
  if (spec.quad_order < 1)
    throw ValidationError("quad_order must be at least 1");
  if (spec.l2_order < 1) throw ValidationError("l2_order must be at least 1");
  if (spec.field_kind != "trig" && spec.field_kind != "penning")
    throw ValidationError("unknown field kind: " + spec.field_kind);
}

}  // namespace

ExperimentSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid JSON config: ") + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");

  ExperimentSpec spec;
  if (j.contains("preset") && !j["preset"].get<std::string>().empty())
    spec = preset_spec(j["preset"].get<std::string>());

  try {
    if (j.contains("field")) {
      const json& f = j["field"];
      if (f.contains("kind")) spec.field_kind = f["kind"].get<std::string>();
      if (f.contains("alpha")) spec.alpha = f["alpha"].get<double>();
      if (f.contains("r_omega")) spec.r_omega = f["r_omega"].get<double>();
    }
    if (j.contains("eps")) spec.eps_list = j["eps"].get<std::vector<double>>();
    if (j.contains("taus")) spec.taus = j["taus"].get<std::vector<double>>();
    if (j.contains("t_end")) spec.t_end = j["t_end"].get<double>();
    if (j.contains("integrators")) {
      spec.integrators.clear();
      for (const json& name : j["integrators"])
        spec.integrators.push_back(
            integrator_from_string(name.get<std::string>()));
    }
    if (j.contains("reference")) {
      const json& r = j["reference"];
      if (r.contains("integrator"))
        spec.reference_integrator = r["integrator"].get<std::string>();
      if (r.contains("tau_ref")) spec.tau_ref = r["tau_ref"].get<double>();
    }
    if (j.contains("averages")) {
      const json& a = j["averages"];
      if (a.contains("mode"))
        spec.mode = averages_mode_from_string(a["mode"].get<std::string>());
      if (a.contains("quad_order"))
        spec.quad_order = a["quad_order"].get<int>();
    }
    if (j.contains("l2")) {
      const json& l = j["l2"];
      if (l.contains("enabled")) spec.with_l2 = l["enabled"].get<bool>();
      if (l.contains("order")) spec.l2_order = l["order"].get<int>();
    }
    if (j.contains("penning_coherent"))
      spec.penning_coherent = j["penning_coherent"].get<bool>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("invalid config value: ") + e.what());
  }

  validate_spec(spec);
  return spec;
}

std::string spec_to_json(const ExperimentSpec& spec) {
  return spec_to_json_obj(spec).dump(2) + "\n";
}

namespace {

json errors_to_json(const ParameterErrors& e) {
  return {{"q", e.q},         {"p", e.p},
          {"Q", e.Q},         {"P", e.P},
          {"zeta_R", e.zeta_R}, {"zeta_I", e.zeta_I}};
}

double pick_error(const ParameterErrors& e, const std::string& name) {
  if (name == "q") return e.q;
  if (name == "p") return e.p;
  if (name == "Q") return e.Q;
  if (name == "P") return e.P;
  if (name == "zeta_R") return e.zeta_R;
  return e.zeta_I;
}

json slope_to_json(const SlopeRow& row) {
  json pairs = json::array();
  for (const SlopePair& p : row.analysis.pairwise) {
    json entry = {{"tau_coarse", p.tau_coarse},
                  {"tau_fine", p.tau_fine},
                  {"flagged", p.flagged}};
    if (std::isfinite(p.slope)) entry["slope"] = p.slope;
    if (p.flagged) entry["reason"] = p.flag_reason;
    pairs.push_back(entry);
  }
  json out = {{"eps", row.eps},
              {"integrator", integrator_name(row.integrator)},
              {"quantity", row.quantity},
              {"pairwise", pairs},
              {"used_first", row.analysis.used_first},
              {"used_count", row.analysis.used_count}};
  if (std::isfinite(row.analysis.lsq_slope))
    out["lsq_slope"] = row.analysis.lsq_slope;
  return out;
}

}  // namespace

std::vector<SlopeRow> experiment_slopes(const ExperimentResult& result) {
  std::vector<SlopeRow> rows;
  std::vector<std::string> quantities = {"q", "p", "Q", "P", "zeta_R",
                                         "zeta_I"};
  if (result.spec.with_l2) quantities.push_back("l2");
  for (double eps : result.spec.eps_list) {
    for (Integrator it : result.spec.integrators) {
      std::vector<double> taus;
      std::vector<const RunErrors*> errs;
      for (const RunResult& r : result.runs) {
        if (r.eps == eps && r.integrator == it && !r.failed &&
            r.errors.compared > 0) {
          taus.push_back(r.tau);
          errs.push_back(&r.errors);
        }
      }
      if (taus.size() < 2) continue;
      for (const std::string& quantity : quantities) {
        SlopeRow row;
        row.eps = eps;
        row.integrator = it;
        row.quantity = quantity;
        row.taus = taus;
        for (const RunErrors* e : errs)
          row.errors.push_back(quantity == "l2"
                                   ? e->l2_max
                                   : pick_error(e->max_param, quantity));
        row.analysis = convergence_slopes(row.taus, row.errors);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string summary_to_json(const ExperimentResult& result) {
  json j;
  j["preset"] = result.spec.preset;
  j["config"] = spec_to_json_obj(result.spec);

  json runs = json::array();
  for (const RunResult& r : result.runs) {
    json entry = {{"eps", r.eps},
                  {"tau", r.tau},
                  {"integrator", integrator_name(r.integrator)},
                  {"failed", r.failed},
                  {"runtime_s", r.runtime_s}};
    if (r.failed) {
      entry["error"] = r.error;
    } else if (r.errors.compared > 0) {
      entry["compared"] = r.errors.compared;
      entry["max_errors"] = errors_to_json(r.errors.max_param);
      entry["final_errors"] = errors_to_json(r.errors.final_param);
      if (result.spec.with_l2) {
        entry["l2"] = {{"max", r.errors.l2_max},
                       {"final", r.errors.l2_final},
                       {"saturated", r.errors.l2_saturated}};
      }
    }
    runs.push_back(entry);
  }
  j["runs"] = runs;

  json slopes = json::array();
  for (const SlopeRow& row : experiment_slopes(result))
    slopes.push_back(slope_to_json(row));
  j["slopes"] = slopes;
  return j.dump(2) + "\n";
}

std::string scaling_to_json(const TrapParameters& trap,
                            const PenningScalingResult& scaling) {
  json j;
  j["trap"] = {{"mass_kg", trap.mass_kg},
               {"B0_tesla", trap.B0_tesla},
               {"phi0_volts", trap.phi0_volts},
               {"delta_m", trap.delta_m}};
  j["omega_c"] = scaling.omega_c;
  j["omega_3"] = scaling.omega_3;
  j["Omega"] = scaling.Omega;
  j["omega_plus"] = scaling.omega_plus;
  j["omega_minus"] = scaling.omega_minus;
  j["nu_plus_hz"] = scaling.nu_plus;
  j["nu_3_hz"] = scaling.nu_3;
  j["nu_minus_hz"] = scaling.nu_minus;
  j["ratio_omega"] = scaling.ratio_omega;
  j["ratio_B"] = scaling.ratio_B;
  j["eps"] = scaling.eps;
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw ValidationError("write failed: " + path);
}

}  // namespace gwp
