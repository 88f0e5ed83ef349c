#pragma once

#include <string>
#include <vector>

#include "gwp/scenarios.hpp"

namespace gwp {

// Shortest decimal representation that parses back to the same bits.
std::string format_double(double x);
double parse_double(const std::string& text);

std::string averages_mode_name(AveragesMode mode);
AveragesMode averages_mode_from_string(const std::string& name);

std::vector<std::string> csv_columns(int dim);
std::string render_csv(const std::vector<WavePacketState>& records,
                       const AverageEngine& engine);
void emit_csv(const std::vector<WavePacketState>& records,
              const AverageEngine& engine, const std::string& path);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
CsvTable parse_csv(const std::string& text);

struct SlopePair {
  double tau_coarse = 0.0;
  double tau_fine = 0.0;
  double slope = 0.0;
  bool flagged = false;
  std::string flag_reason;
};

struct SlopeAnalysis {
  std::vector<SlopePair> pairwise;
  double lsq_slope = 0.0;  // NaN when every pair is flagged
  int used_first = 0;      // first point index entering the fit
  int used_count = 0;      // number of points entering the fit
};

// taus strictly decreasing; errors aligned with taus.
SlopeAnalysis convergence_slopes(const std::vector<double>& taus,
                                 const std::vector<double>& errors);

// One slope analysis per (eps, integrator, compared quantity).
struct SlopeRow {
  double eps = 0.0;
  Integrator integrator = Integrator::Boris;
  std::string quantity;
  std::vector<double> taus;
  std::vector<double> errors;
  SlopeAnalysis analysis;
};
std::vector<SlopeRow> experiment_slopes(const ExperimentResult& result);

ExperimentSpec spec_from_json(const std::string& text);
std::string spec_to_json(const ExperimentSpec& spec);
std::string summary_to_json(const ExperimentResult& result);
std::string scaling_to_json(const TrapParameters& trap,
                            const PenningScalingResult& scaling);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gwp
