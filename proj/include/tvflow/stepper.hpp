#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tvflow/certificates.hpp"
#include "tvflow/grid.hpp"
#include "tvflow/prox.hpp"
#include "tvflow/source.hpp"
#include "tvflow/tv_energy.hpp"

namespace tvflow {

// Discrete solution of u' - div(Du/|Du|) = f with zero Dirichlet data.
struct Trajectory {
  std::vector<double> times;         // t_0 = 0 < t_1 < ... < t_K
  std::vector<int> snapshot_steps;   // step indices of the stored snapshots
  std::vector<ScalarField> snapshots;
  std::vector<DualField> duals;      // z at each snapshot step (zero at step 0)
  std::vector<StepRecord> records;   // records[k] describes step k + 1
  ScalarField final_state;
  DualField final_dual;
  std::vector<std::string> warnings;
  int step_count() const { return static_cast<int>(records.size()); }
};

enum class ViolationPolicy { kAbort, kWarn };

struct RunOptions {
  int snapshot_every = 1;  // 0 keeps only the first and last states
  bool warm_start = true;
  ViolationPolicy policy = ViolationPolicy::kAbort;
  std::optional<CertificateTolerances> tolerances;  // default: from gap_tol
  // Called after every step with the record and the new state.
  std::function<void(const StepRecord&, const ScalarField&, const DualField&)> on_step;
};

// Thrown by run() when a step violates a certificate under kAbort.
class RunAborted : public std::runtime_error {
 public:
  RunAborted(StepRecord record, std::vector<CertificateReport> failures);
  const StepRecord& record() const { return record_; }
  const std::vector<CertificateReport>& failures() const { return failures_; }

 private:
  StepRecord record_;
  std::vector<CertificateReport> failures_;
};

struct StepResult {
  ScalarField u;
  DualField z;
  StepRecord record;
};

// One implicit Euler step u^{k+1} = prox_{tau TV}(u^k + tau f^k), with the
// full ledger filled in.
StepResult step(const ScalarField& u_prev, const ScalarField& f_step, double tau,
                const ProxConfig& cfg, const DualField* warm_start = nullptr);

// ceil(t_end / tau) steps from u0; the last one shortened to land on t_end.
Trajectory run(const ScalarField& u0, const SourceTerm& f, double t_end, double tau,
               const ProxConfig& cfg, const RunOptions& options = {});

// The step boundaries run() uses: 0, tau, 2 tau, ..., t_end.
std::vector<double> time_schedule(double t_end, double tau);

// sum_k tau_k |f^k|_2 over a schedule: the discrete L^1(0,T;L^2) norm.
double source_l1l2_norm(const SourceTerm& f, const std::vector<double>& times);

}  // namespace tvflow
