#pragma once

#include <string>
#include <vector>

#include "tvflow/grid.hpp"
#include "tvflow/source.hpp"
#include "tvflow/tv_energy.hpp"

namespace tvflow {

struct Trajectory;

// Outcome of one machine-checkable condition. pass <=> value <= tolerance.
struct CertificateReport {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  long location = -1;  // step index, or face/cell index of the worst violation

  static CertificateReport Make(std::string name, double value, double tolerance,
                                long location);
  // "name,value,tolerance,pass,location"
  std::string csv_row() const;
  static const char* csv_header() { return "name,value,tolerance,pass,location"; }
};

// Default tolerances, each traced to the inner duality-gap threshold plus
// rounding: equation and energy 10 gap_tol, flatness gap_tol, boundary
// 10 gap_tol times the boundary measure, Green 1e-10 relative.
struct CertificateTolerances {
  double equation = 0.0;
  double flatness = 0.0;
  double boundary = 0.0;
  double green_rel = 1e-10;
  double energy = 0.0;

  static CertificateTolerances FromGapTol(double gap_tol, const Grid& grid);
};

// tau * | (u_next - u_prev)/tau - div z - f |_2. Location: worst cell.
CertificateReport check_equation(const ScalarField& u_prev, const ScalarField& u_next,
                                 const DualField& z, const ScalarField& f_step,
                                 double tau, double tolerance);

// Total pairing defect of (u, z); every group contribution must be
// >= -1e-12. Location: first face of the largest contribution.
CertificateReport check_flatness(const ScalarField& u, const DualField& z, TvMode mode,
                                 double tolerance);

// Sum over boundary faces of (|u_b| + u_b [z, nu]) times face area, skipping
// faces where |u_b| is at rounding level (any trace is admissible there).
// Location: worst boundary face (axis-0 faces first, then axis-1 faces
// offset by the axis-0 face count).
CertificateReport check_boundary_sign(const ScalarField& u, const DualField& z,
                                      double tolerance);

// | <div z, v> + (z, Dv) - integral of v [z, nu] |. The tolerance is
// rel_tol times the sum of the magnitudes of the three terms.
CertificateReport check_green(const DualField& z, const ScalarField& v,
                              double rel_tol = 1e-10);

// Comparison of two runs on one grid and time schedule:
//   value = max_k [ 1/2|d^{k+1}|^2 - 1/2|d^k|^2 - tau <f1^k - f2^k, d^{k+1}> ]
// with d = u1 - u2. Both trajectories need a snapshot at every step.
struct ContractionReport {
  CertificateReport comparison;  // the per-step inequality, against `slack`
  CertificateReport triangle;    // |d^k| <= |d^0| + sum tau|f1 - f2| + gap slack
  std::vector<double> difference_norms;  // |d^k|_2, k = 0..K
  std::vector<double> difference_bound;  // right-hand side of `triangle`
};
ContractionReport check_contraction(const Trajectory& a, const Trajectory& b,
                                    const SourceTerm& fa, const SourceTerm& fb,
                                    double slack = 1e-10);

// max_{k >= 1} [ |u^k|_2 - |u^0|_2 - sum_{j<k} tau |f^j|_2 ]; tolerance is the
// accumulated inner-solver slack sum_j sqrt(tau_j gap_j) plus rounding.
CertificateReport check_apriori(const Trajectory& traj, const SourceTerm& f);

// max_K [ |u^K|^2 + 2 sum_{k<K} tau TV(u^{k+1})
//         - |u^0|^2 - 2 sum_{k<K} tau |f^k|_2 max_j |u^j|_2 ];
// tolerance 2 sum tau gap plus rounding.
CertificateReport check_energy_estimate(const Trajectory& traj, const SourceTerm& f);

// Pass/fail of every per-step certificate stored in a record.
std::vector<CertificateReport> step_certificates(const StepRecord& rec,
                                                 const CertificateTolerances& tol);

}  // namespace tvflow
