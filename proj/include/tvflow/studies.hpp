#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tvflow/certificates.hpp"
#include "tvflow/io.hpp"
#include "tvflow/stepper.hpp"

namespace tvflow {

// One pair of truncation levels n < m.
struct CauchyRow {
  double level_lo = 0.0;
  double level_hi = 0.0;
  double max_difference = 0.0;  // max_k |u_n^k - u_m^k|_2
  double source_bound = 0.0;    // sum_k tau_k |f_n^k - f_m^k|_2
  double gap_slack = 0.0;       // sum_k sqrt(tau_k (gap_n^k + gap_m^k))
};

struct CauchyTable {
  std::vector<double> levels;  // sorted ascending
  std::vector<CauchyRow> rows;  // sorted by (level_lo, level_hi)
  // The largest difference among rows sharing level_lo strictly decreases
  // as level_lo grows.
  bool monotone = true;
  // Every max_difference is within source_bound + gap_slack.
  bool bounded = true;
  std::vector<CertificateReport> failures;  // step certificates of all runs
};

// Runs the configuration once per truncation level with source T_level(f).
CauchyTable mollification_study(const RunSpec& spec, std::vector<double> levels);

std::string format_cauchy_table(const CauchyTable& table);

struct ExtinctionResult {
  double threshold = 0.0;
  std::optional<double> extinction_time;  // first t_k with max|u^k| < threshold
  std::optional<double> predicted;        // analytic value for the initial shape
  std::vector<double> times;              // t_0 .. t_last computed
  std::vector<double> sup_norms;          // max|u^k| at those times
  std::vector<StepRecord> records;
  std::vector<CertificateReport> failures;
};

// Analytic extinction time of the zero-source flow from an indicator or disc
// plateau that stays away from the boundary; empty for other shapes.
std::optional<double> predicted_extinction(const ShapeSpec& shape, int dimension);

// Zero-source run that stops at the first step below the threshold
// (default: the smallest spacing) or at t_end.
ExtinctionResult extinction_study(const RunSpec& spec);

struct OracleBattery {
  int instances = 0;
  double worst_error = 0.0;  // max |rof_prox - taut_string_1d|_inf
  double worst_gap = 0.0;    // largest duality gap at termination
  int worst_instance = -1;
  bool all_converged = true;
};

// Random 1D instances (seeds 0 .. count - 1): piecewise-constant data with
// noise, values in [-5, 5], tau uniform in [0.01, 2]. With vary_size the cell count is drawn
// from [2, n], otherwise it is n.
OracleBattery oracle_battery(int n, int count, double gap_tol = 1e-10, bool vary_size = false);

}  // namespace tvflow
