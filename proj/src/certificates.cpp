#include "tvflow/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "tvflow/stepper.hpp"

namespace tvflow {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_feasible(const DualField& z, TvMode mode, const char* what) {
  if (max_group_norm(z, mode) > 1.0 + 1e-12) {
    throw std::invalid_argument(std::string(what) + ": dual field is infeasible");
  }
}

// States u^0..u^K of a trajectory stored with a snapshot at every step.
const std::vector<ScalarField>& every_step(const Trajectory& tr, const char* what) {
  const int steps = tr.step_count();
  bool ok = static_cast<int>(tr.snapshot_steps.size()) == steps + 1;
  for (int k = 0; ok && k <= steps; ++k) ok = tr.snapshot_steps[k] == k;
  if (!ok) {
    throw std::invalid_argument(std::string(what) + ": trajectory lacks a snapshot per step");
  }
  return tr.snapshots;
}

}  // namespace

CertificateReport CertificateReport::Make(std::string name, double value,
                                          double tolerance, long location) {
  return {std::move(name), value, tolerance, value <= tolerance, location};
}

std::string CertificateReport::csv_row() const {
  return name + "," + fmt17(value) + "," + fmt17(tolerance) + "," +
         (pass ? "1" : "0") + "," + std::to_string(location);
}

CertificateTolerances CertificateTolerances::FromGapTol(double gap_tol, const Grid& grid) {
  CertificateTolerances t;
  t.equation = 10.0 * gap_tol;
  t.flatness = gap_tol;
  t.boundary = 10.0 * gap_tol * grid.perimeter();
  t.green_rel = 1e-10;
  t.energy = 10.0 * gap_tol;
  return t;
}

CertificateReport check_equation(const ScalarField& u_prev, const ScalarField& u_next,
                                 const DualField& z, const ScalarField& f_step,
                                 double tau, double tolerance) {
  const Grid& g = u_prev.grid();
  require_same_grid(g, u_next.grid(), "check_equation");
  require_same_grid(g, z.grid(), "check_equation");
  require_same_grid(g, f_step.grid(), "check_equation");
  if (!(tau > 0.0)) throw std::invalid_argument("check_equation: tau must be positive");
  const ScalarField div = divergence(z);
  double sum = 0.0, worst = -1.0;
  long where = -1;
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const double r = (u_next[i] - u_prev[i]) / tau - div[i] - f_step[i];
    sum += r * r;
    if (std::abs(r) > worst) {
      worst = std::abs(r);
      where = static_cast<long>(i);
    }
  }
  const double value = tau * std::sqrt(sum * g.cell_volume());
  return CertificateReport::Make("check_equation", value, tolerance, where);
}

CertificateReport check_flatness(const ScalarField& u, const DualField& z, TvMode mode,
                                 double tolerance) {
  require_same_grid(u.grid(), z.grid(), "check_flatness");
  require_feasible(z, mode, "check_flatness");
  const PairingDefect d = pairing_defect(u, z, mode);
  long where = static_cast<long>(d.worst_face);
  if (d.worst_axis == 1) where += static_cast<long>(u.grid().face_count(0));
  CertificateReport rep = CertificateReport::Make("check_flatness", d.total, tolerance, where);
  // Each summand is nonnegative for feasible z, up to rounding.
  if (d.min_term < -1e-12) rep.pass = false;
  return rep;
}

CertificateReport check_boundary_sign(const ScalarField& u, const DualField& z,
                                      double tolerance) {
  const Grid& g = u.grid();
  require_same_grid(g, z.grid(), "check_boundary_sign");
  require_feasible(z, TvMode::kAnisotropic, "check_boundary_sign");
  const double floor = 10.0 * kEps * std::max(1.0, max_abs(u));
  double sum = 0.0, worst = -1.0;
  long where = -1;
  for_each_boundary_face(g, [&](int axis, std::size_t f, std::size_t c, double sign) {
    const double ub = u[c];
    if (std::abs(ub) < floor) return;
    const double zn = sign * z.component(axis)[f];
    const double term = (std::abs(ub) + ub * zn) * g.face_area(axis);
    sum += term;
    if (term > worst) {
      worst = term;
      where = static_cast<long>(f) + (axis == 1 ? static_cast<long>(g.face_count(0)) : 0);
    }
  });
  return CertificateReport::Make("check_boundary_sign", sum, tolerance, where);
}

CertificateReport check_green(const DualField& z, const ScalarField& v, double rel_tol) {
  require_same_grid(z.grid(), v.grid(), "check_green");
  const double a = inner_product(divergence(z), v);
  const double b = interior_pairing(z, v);
  const double c = boundary_flux(z, v);
  const double scale = std::abs(a) + std::abs(b) + std::abs(c);
  return CertificateReport::Make("check_green", std::abs(a + b - c), rel_tol * scale, -1);
}

ContractionReport check_contraction(const Trajectory& a, const Trajectory& b,
                                    const SourceTerm& fa, const SourceTerm& fb,
                                    double slack) {
  if (a.times != b.times) throw std::invalid_argument("check_contraction: schedule mismatch");
  const auto& ua = every_step(a, "check_contraction");
  const auto& ub = every_step(b, "check_contraction");
  require_same_grid(ua[0].grid(), ub[0].grid(), "check_contraction");
  require_same_grid(ua[0].grid(), fa.grid(), "check_contraction");
  require_same_grid(ua[0].grid(), fb.grid(), "check_contraction");

  const int steps = a.step_count();
  ContractionReport out;
  double worst = steps > 0 ? -std::numeric_limits<double>::infinity() : 0.0;
  long where = -1;
  ScalarField d = ua[0] - ub[0];
  out.difference_norms.push_back(norm_l2(d));
  out.difference_bound.push_back(out.difference_norms[0]);
  double tri_worst = 0.0;
  long tri_where = -1;
  for (int k = 0; k < steps; ++k) {
    const double t0 = a.times[k], t1 = a.times[k + 1], tau = t1 - t0;
    const ScalarField df = fa.average(t0, t1) - fb.average(t0, t1);
    ScalarField dn = ua[k + 1] - ub[k + 1];
    const double value =
        0.5 * inner_product(dn, dn) - 0.5 * inner_product(d, d) - tau * inner_product(df, dn);
    if (value > worst) {
      worst = value;
      where = k + 1;
    }
    const double gaps = std::max(0.0, a.records[k].duality_gap) +
                        std::max(0.0, b.records[k].duality_gap);
    const double norm = norm_l2(dn);
    out.difference_norms.push_back(norm);
    out.difference_bound.push_back(out.difference_bound.back() + tau * norm_l2(df) +
                                   std::sqrt(tau * gaps));
    const double excess = norm - out.difference_bound.back();
    if (excess > tri_worst) {
      tri_worst = excess;
      tri_where = k + 1;
    }
    d = std::move(dn);
  }
  out.comparison = CertificateReport::Make("check_contraction", worst, slack, where);
  out.triangle = CertificateReport::Make("check_contraction_triangle", tri_worst,
                                         1e-12 * (1.0 + out.difference_bound.back()),
                                         tri_where);
  return out;
}

CertificateReport check_apriori(const Trajectory& traj, const SourceTerm& f) {
  const int steps = traj.step_count();
  if (steps == 0) return CertificateReport::Make("check_apriori", 0.0, 0.0, -1);
  const double norm0 = std::sqrt(2.0 * traj.records[0].half_l2_prev);
  std::vector<double> gains;
  double slack = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double t0 = traj.times[k], t1 = traj.times[k + 1];
    gains.push_back((t1 - t0) * norm_l2(f.average(t0, t1)));
    slack += std::sqrt((t1 - t0) * std::max(0.0, traj.records[k].duality_gap));
  }
  const std::vector<double> bound = discrete_gronwall(norm0, gains);
  double worst = -std::numeric_limits<double>::infinity();
  long where = -1;
  for (int k = 1; k <= steps; ++k) {
    const double norm = std::sqrt(2.0 * traj.records[k - 1].half_l2_next);
    if (norm - bound[k] > worst) {
      worst = norm - bound[k];
      where = k;
    }
  }
  slack += 1e-12 * (1.0 + bound.back());
  return CertificateReport::Make("check_apriori", worst, slack, where);
}

CertificateReport check_energy_estimate(const Trajectory& traj, const SourceTerm& f) {
  const int steps = traj.step_count();
  if (steps == 0) return CertificateReport::Make("check_energy_estimate", 0.0, 0.0, -1);
  const double l2_0 = 2.0 * traj.records[0].half_l2_prev;
  double max_norm = std::sqrt(l2_0);
  for (const auto& r : traj.records) max_norm = std::max(max_norm, std::sqrt(2.0 * r.half_l2_next));

  double tv_sum = 0.0, src_sum = 0.0, slack = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  long where = -1;
  for (int k = 0; k < steps; ++k) {
    const auto& r = traj.records[k];
    const double t0 = traj.times[k], t1 = traj.times[k + 1], tau = t1 - t0;
    tv_sum += tau * r.tv_next;
    src_sum += tau * norm_l2(f.average(t0, t1));
    slack += 2.0 * tau * std::max(0.0, r.duality_gap);
    const double lhs = 2.0 * r.half_l2_next + 2.0 * tv_sum;
    const double rhs = l2_0 + 2.0 * src_sum * max_norm;
    if (lhs - rhs > worst) {
      worst = lhs - rhs;
      where = k + 1;
    }
  }
  slack += 1e-12 * (1.0 + l2_0 + 2.0 * src_sum * max_norm);
  return CertificateReport::Make("check_energy_estimate", worst, slack, where);
}

std::vector<CertificateReport> step_certificates(const StepRecord& rec,
                                                 const CertificateTolerances& tol) {
  const long at = rec.step;
  std::vector<CertificateReport> out{
      CertificateReport::Make("check_equation", rec.equation_residual, tol.equation, at),
      CertificateReport::Make("check_flatness", rec.flatness_gap, tol.flatness, at),
      CertificateReport::Make("check_boundary_sign", rec.boundary_violation, tol.boundary, at),
      CertificateReport::Make("check_green", rec.green_residual, tol.green_rel, at),
      CertificateReport::Make("energy_identity", rec.energy_residual, tol.energy, at),
      CertificateReport::Make("chain_rule", rec.chain_rule_residual, 1e-12, at),
  };
  return out;
}

}  // namespace tvflow
