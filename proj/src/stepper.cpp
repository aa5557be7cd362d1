#include "tvflow/stepper.hpp"

#include <cmath>
#include <sstream>

namespace tvflow {

namespace {

std::string describe(const StepRecord& rec, const std::vector<CertificateReport>& fails) {
  std::ostringstream os;
  os << "certificate violation at step " << rec.step << " (t=" << rec.t << "):";
  for (const auto& f : fails) {
    os << ' ' << f.name << '=' << f.value << " > " << f.tolerance << ';';
  }
  return os.str();
}

}  // namespace

RunAborted::RunAborted(StepRecord record, std::vector<CertificateReport> failures)
    : std::runtime_error(describe(record, failures)),
      record_(record),
      failures_(std::move(failures)) {}

StepResult step(const ScalarField& u_prev, const ScalarField& f_step, double tau,
                const ProxConfig& cfg, const DualField* warm_start) {
  require_same_grid(u_prev.grid(), f_step.grid(), "step");
  if (!(tau > 0.0)) throw std::invalid_argument("step: tau must be positive");
  ScalarField y = f_step;
  y *= tau;
  y += u_prev;
  ProxResult pr = rof_prox(y, tau, cfg, warm_start);
  StepRecord rec = energy_ledger(u_prev, pr.u, pr.z, f_step, tau, cfg.mode);
  rec.inner_iterations = pr.iterations;
  rec.converged = pr.converged;
  return {std::move(pr.u), std::move(pr.z), rec};
}

std::vector<double> time_schedule(double t_end, double tau) {
  if (!(t_end > 0.0) || !(tau > 0.0) || tau > t_end * (1.0 + 1e-12)) {
    throw std::invalid_argument("time schedule: need 0 < tau <= t_end");
  }
  // Steps whose length would fall below 1e-9 tau are merged into rounding.
  const long steps = static_cast<long>(std::ceil(t_end / tau - 1e-9));
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (long k = 0; k < steps; ++k) t[k] = static_cast<double>(k) * tau;
  t[steps] = t_end;
  return t;
}

double source_l1l2_norm(const SourceTerm& f, const std::vector<double>& times) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    s += (times[k + 1] - times[k]) * norm_l2(f.average(times[k], times[k + 1]));
  }
  return s;
}

Trajectory run(const ScalarField& u0, const SourceTerm& f, double t_end, double tau,
               const ProxConfig& cfg, const RunOptions& options) {
  require_same_grid(u0.grid(), f.grid(), "run");
  if (!u0.all_finite()) throw std::invalid_argument("run: non-finite initial data");
  cfg.validate(u0.grid());
  const CertificateTolerances tol =
      options.tolerances.value_or(CertificateTolerances::FromGapTol(cfg.gap_tol, u0.grid()));

  Trajectory traj{time_schedule(t_end, tau), {}, {}, {}, {}, u0, DualField(u0.grid()), {}};
  const int steps = static_cast<int>(traj.times.size()) - 1;
  traj.records.reserve(steps);
  traj.snapshot_steps.push_back(0);
  traj.snapshots.push_back(u0);
  traj.duals.emplace_back(u0.grid());

  ScalarField u = u0;
  DualField z(u0.grid());
  for (int k = 0; k < steps; ++k) {
    const double t0 = traj.times[k], t1 = traj.times[k + 1];
    const ScalarField fk = f.average(t0, t1);
    StepResult r = step(u, fk, t1 - t0, cfg, options.warm_start ? &z : nullptr);
    r.record.step = k + 1;
    r.record.t = t1;

    std::vector<CertificateReport> fails;
    for (auto& rep : step_certificates(r.record, tol)) {
      if (!rep.pass) fails.push_back(std::move(rep));
    }
    if (options.on_step) options.on_step(r.record, r.u, r.z);
    traj.records.push_back(r.record);
    u = std::move(r.u);
    z = std::move(r.z);

    const bool last = k + 1 == steps;
    const bool snap = options.snapshot_every > 0 ? (k + 1) % options.snapshot_every == 0 : false;
    if (snap || last) {
      traj.snapshot_steps.push_back(k + 1);
      traj.snapshots.push_back(u);
      traj.duals.push_back(z);
    }
    if (!fails.empty()) {
      if (options.policy == ViolationPolicy::kAbort) {
        throw RunAborted(traj.records.back(), std::move(fails));
      }
      traj.warnings.push_back(describe(traj.records.back(), fails));
    }
  }
  traj.final_state = std::move(u);
  traj.final_dual = std::move(z);
  return traj;
}

}  // namespace tvflow
