#pragma once

#include <optional>
#include <vector>

#include "tvflow/grid.hpp"
#include "tvflow/tv_energy.hpp"

namespace tvflow {

struct ProxConfig {
  // Absolute duality-gap threshold (energy units).
  double gap_tol = 1e-8;
  int max_iters = 200000;
  // Dual step size. Unset means 1 / ||div||^2 (h^2/4 in 1D, h^2/8 in 2D for
  // square cells), the largest admissible value.
  std::optional<double> dual_step;
  TvMode mode = TvMode::kIsotropic;
  // Keep, per inner iteration, the smallest gap reached so far in
  // ProxResult::gap_trace.
  bool record_gap_trace = false;

  // Throws std::invalid_argument when a field is out of range for `grid`.
  void validate(const Grid& grid) const;
  double step_for(const Grid& grid) const;
};

struct ProxResult {
  ScalarField u;
  DualField z;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> gap_trace;
};

// Solves min_v TV(v) + 1/(2 tau) |v - y|^2 by projected gradient ascent on the
// dual. The returned pair satisfies u = y + tau div z exactly up to rounding,
// and z is feasible (every group norm <= 1). `gap` is the duality gap of the
// returned pair, which for such a pair equals pairing_defect(u, z).total.
//
// `warm_start`, if given, is projected onto the feasible set and used as the
// initial dual iterate.
ProxResult rof_prox(const ScalarField& y, double tau, const ProxConfig& cfg,
                    const DualField* warm_start = nullptr);

double primal_objective(const ScalarField& u, const ScalarField& y, double tau,
                        TvMode mode);
double dual_objective(const DualField& z, const ScalarField& y, double tau);

// primal_objective(u) - dual_objective(z). Throws std::invalid_argument if z
// is infeasible beyond 1e-12.
double duality_gap(const ScalarField& u, const DualField& z, const ScalarField& y,
                   double tau, TvMode mode = TvMode::kIsotropic);

// Exact minimizer of the 1D problem rof_prox solves (both modes coincide in
// 1D), computed by a direct forward/backward pass over piecewise-linear
// subgradient messages. O(n^2) worst case.
ScalarField taut_string_1d(const ScalarField& y, double tau);

}  // namespace tvflow
