#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "tvflow/grid.hpp"

namespace tvflow {

// How |Du| is discretized. Boundary faces (the Dirichlet trace term) are
// always measured face by face.
//
// kAnisotropic: every face is its own group, TV = sum |face gradient|.
// kIsotropic:   in 2D the interior faces to the right of and above each cell
//               form one group measured in the Euclidean norm; in 1D it
//               coincides with kAnisotropic.
enum class TvMode { kIsotropic, kAnisotropic };

std::string_view to_string(TvMode mode);
TvMode parse_tv_mode(std::string_view text);

struct FaceRef {
  int axis;
  std::size_t index;
};

// Visits every face group exactly once as fn(const FaceRef* faces, int count).
// Each face of the grid belongs to exactly one group.
template <typename Fn>
void for_each_group(const Grid& g, TvMode mode, Fn&& fn) {
  const int n0 = g.n(0), n1 = g.n(1);
  FaceRef buf[2];
  if (g.dim() == 1 || mode == TvMode::kAnisotropic) {
    for (std::size_t f = 0; f < g.face_count(0); ++f) {
      buf[0] = {0, f};
      fn(buf, 1);
    }
    for (std::size_t f = 0; f < g.face_count(1); ++f) {
      buf[0] = {1, f};
      fn(buf, 1);
    }
    return;
  }
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      int c = 0;
      if (i + 1 < n0) buf[c++] = {0, g.xface(i + 1, j)};
      if (j + 1 < n1) buf[c++] = {1, g.yface(i, j + 1)};
      if (c > 0) fn(buf, c);
    }
  }
  for_each_boundary_face(g, [&](int axis, std::size_t f, std::size_t, double) {
    buf[0] = {axis, f};
    fn(buf, 1);
  });
}

// Discrete total variation including the boundary jump against the zero
// exterior, so total_variation(u) = 0 only for u = 0.
double total_variation(const ScalarField& u, TvMode mode);
// The boundary part alone: sum over boundary faces of |u_b| times face area.
double boundary_term(const ScalarField& u);

// Largest group norm of z; z is dual-feasible when this is <= 1.
double max_group_norm(const DualField& z, TvMode mode);
// Rescales each group of z onto the unit ball.
void project_unit_ball(DualField& z, TvMode mode);

// vol * sum over groups of (|grad u|_G - z_G . (grad u)_G). Nonnegative for
// feasible z; zero exactly when z saturates along the gradient wherever the
// gradient is nonzero.
struct PairingDefect {
  double total = 0.0;
  double min_term = 0.0;   // smallest single group contribution
  double max_term = 0.0;   // largest single group contribution
  int worst_axis = 0;      // first face of the largest contribution
  std::size_t worst_face = 0;
};
PairingDefect pairing_defect(const ScalarField& u, const DualField& z, TvMode mode);

// Per-step ledger of the discrete energy identity
//   1/2|u'|^2 - 1/2|u|^2 + 1/2|u' - u|^2 + tau TV(u') = tau <f, u'> + r
// together with every per-step certificate value.
struct StepRecord {
  int step = 0;
  double t = 0.0;             // time at the end of the step
  double tau = 0.0;
  double half_l2_prev = 0.0;
  double half_l2_next = 0.0;
  double tv_next = 0.0;       // includes the boundary term
  double boundary_term = 0.0;
  double source_pairing = 0.0;  // <f^k, u^{k+1}>
  double source_l2 = 0.0;       // |f^k|_2
  double increment_sq = 0.0;    // 1/2 |u^{k+1} - u^k|^2
  double duality_gap = 0.0;
  double flatness_gap = 0.0;
  double boundary_violation = 0.0;
  double green_residual = 0.0;
  double equation_residual = 0.0;
  double energy_residual = 0.0;
  double chain_rule_residual = 0.0;
  int inner_iterations = 0;
  bool converged = true;
};

// Fills every StepRecord field from the step data. `inner_iterations` and
// `converged` are left for the caller.
StepRecord energy_ledger(const ScalarField& u_prev, const ScalarField& u_next,
                         const DualField& z, const ScalarField& f_step,
                         double tau, TvMode mode);

}  // namespace tvflow
