#include "tvflow/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace tvflow {

namespace {

void collect_failures(const std::vector<StepRecord>& records, const CertificateTolerances& tol,
                      std::vector<CertificateReport>& out) {
  for (const auto& rec : records) {
    for (auto& rep : step_certificates(rec, tol)) {
      if (!rep.pass) out.push_back(std::move(rep));
    }
  }
}

}  // namespace

CauchyTable mollification_study(const RunSpec& spec, std::vector<double> levels) {
  for (double l : levels) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw std::invalid_argument("mollification_study: levels must be positive");
    }
  }
  std::sort(levels.begin(), levels.end());
  if (std::adjacent_find(levels.begin(), levels.end()) != levels.end()) {
    throw std::invalid_argument("mollification_study: repeated level");
  }

  CauchyTable table;
  table.levels = levels;
  const ScalarField u0 = spec.initial_field();
  const SourceTerm f = spec.source_term();
  const CertificateTolerances tol = spec.tolerances();
  RunOptions opts = spec.run_options();
  opts.snapshot_every = 1;

  std::vector<SourceTerm> sources;
  std::vector<Trajectory> runs;
  for (double l : levels) {
    sources.push_back(f.truncated(l));
    runs.push_back(run(u0, sources.back(), spec.t_end, spec.tau, spec.prox, opts));
    collect_failures(runs.back().records, tol, table.failures);
  }

  const std::vector<double>& times = runs.empty() ? std::vector<double>{} : runs[0].times;
  for (std::size_t a = 0; a < levels.size(); ++a) {
    for (std::size_t b = a + 1; b < levels.size(); ++b) {
      CauchyRow row{levels[a], levels[b], 0.0, 0.0, 0.0};
      for (std::size_t k = 0; k + 1 < times.size(); ++k) {
        const double t0 = times[k], t1 = times[k + 1];
        row.max_difference = std::max(
            row.max_difference, norm_l2(runs[a].snapshots[k + 1] - runs[b].snapshots[k + 1]));
        row.source_bound +=
            (t1 - t0) * norm_l2(sources[a].average(t0, t1) - sources[b].average(t0, t1));
        row.gap_slack += std::sqrt((t1 - t0) * (std::max(0.0, runs[a].records[k].duality_gap) +
                                                std::max(0.0, runs[b].records[k].duality_gap)));
      }
      if (row.max_difference > row.source_bound + row.gap_slack) table.bounded = false;
      table.rows.push_back(row);
    }
  }

  std::map<double, double> worst_by_lo;
  for (const auto& r : table.rows) {
    worst_by_lo[r.level_lo] = std::max(worst_by_lo[r.level_lo], r.max_difference);
  }
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& [lo, worst] : worst_by_lo) {
    if (!(worst < prev)) table.monotone = false;
    prev = worst;
  }
  return table;
}

std::string format_cauchy_table(const CauchyTable& table) {
  std::string out = "n,m,max_diff,source_bound,gap_slack\n";
  for (const auto& r : table.rows) {
    out += format_double(r.level_lo) + ',' + format_double(r.level_hi) + ',' +
           format_double(r.max_difference) + ',' + format_double(r.source_bound) + ',' +
           format_double(r.gap_slack) + '\n';
  }
  return out;
}

std::optional<double> predicted_extinction(const ShapeSpec& shape, int dimension) {
  const double height = std::abs(shape.height);
  switch (shape.kind) {
    case ShapeSpec::Kind::kIndicator:
      if (dimension == 1) return height * (shape.hi[0] - shape.lo[0]) / 2.0;
      return std::nullopt;
    case ShapeSpec::Kind::kDisc:
      return dimension == 1 ? height * shape.radius : height * shape.radius / 2.0;
    default:
      return std::nullopt;
  }
}

ExtinctionResult extinction_study(const RunSpec& spec) {
  if (spec.source.kind != SourceSpec::Kind::kZero) {
    throw std::invalid_argument("extinction_study: the source must be zero");
  }
  const Grid grid = spec.grid();
  ExtinctionResult res;
  double min_h = grid.h(0);
  if (grid.dim() == 2) min_h = std::min(min_h, grid.h(1));
  res.threshold = spec.extinction_threshold.value_or(min_h);
  res.predicted = predicted_extinction(spec.initial, spec.dimension);

  const CertificateTolerances tol = spec.tolerances();
  spec.prox.validate(grid);
  const std::vector<double> times = time_schedule(spec.t_end, spec.tau);
  ScalarField u = spec.initial_field();
  const ScalarField zero(grid);
  DualField z(grid);
  res.times.push_back(0.0);
  res.sup_norms.push_back(max_abs(u));
  if (res.sup_norms.back() < res.threshold) {
    res.extinction_time = 0.0;
    return res;
  }
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    StepResult r = step(u, zero, times[k + 1] - times[k], spec.prox,
                        spec.warm_start ? &z : nullptr);
    r.record.step = static_cast<int>(k + 1);
    r.record.t = times[k + 1];
    for (auto& rep : step_certificates(r.record, tol)) {
      if (!rep.pass) res.failures.push_back(std::move(rep));
    }
    res.records.push_back(r.record);
    u = std::move(r.u);
    z = std::move(r.z);
    res.times.push_back(times[k + 1]);
    res.sup_norms.push_back(max_abs(u));
    if (res.sup_norms.back() < res.threshold) {
      res.extinction_time = times[k + 1];
      break;
    }
  }
  return res;
}

OracleBattery oracle_battery(int n, int count, double gap_tol, bool vary_size) {
  if (n < 2) throw std::invalid_argument("oracle_battery: n must be at least 2");
  if (count < 0) throw std::invalid_argument("oracle_battery: count must be nonnegative");
  OracleBattery out;
  ProxConfig cfg;
  cfg.gap_tol = gap_tol;
  cfg.max_iters = 10000000;
  for (int s = 0; s < count; ++s) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(s));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const int cells = vary_size ? std::uniform_int_distribution<int>(2, n)(rng) : n;
    const double tau = std::uniform_real_distribution<double>(0.01, 2.0)(rng);
    const Grid g = Grid::Line(cells, 1.0);
    ScalarField y(g);
    double level = 5.0 * unit(rng);
    for (int i = 0; i < cells; ++i) {
      if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.15) level = 5.0 * unit(rng);
      y[i] = std::clamp(level + 0.5 * unit(rng), -5.0, 5.0);
    }
    const ProxResult pr = rof_prox(y, tau, cfg);
    const ScalarField exact = taut_string_1d(y, tau);
    const double err = max_abs(pr.u - exact);
    if (err > out.worst_error) {
      out.worst_error = err;
      out.worst_instance = s;
    }
    out.worst_gap = std::max(out.worst_gap, pr.gap);
    out.all_converged = out.all_converged && pr.converged;
    ++out.instances;
  }
  return out;
}

}  // namespace tvflow
