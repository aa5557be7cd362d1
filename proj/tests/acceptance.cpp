// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance <path-to-tvflow-cli> <work-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tvflow/io.hpp"
#include "tvflow/steklov.hpp"
#include "tvflow/studies.hpp"

using namespace tvflow;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Certificate failures gathered from every acceptance run (criterion 3).
struct Ledger {
  int runs = 0;
  long steps = 0;
  std::vector<std::string> failures;

  void add(const std::string& run, const std::vector<StepRecord>& records,
           const CertificateTolerances& tol) {
    ++runs;
    steps += static_cast<long>(records.size());
    for (const auto& rec : records) {
      for (const auto& rep : step_certificates(rec, tol)) {
        if (!rep.pass) failures.push_back(run + ": " + rep.csv_row());
      }
    }
  }
  void add(const std::string& run, const std::vector<CertificateReport>& reps) {
    ++runs;
    for (const auto& rep : reps) {
      if (!rep.pass) failures.push_back(run + ": " + rep.csv_row());
    }
  }
};

struct Outcome {
  bool pass;
  std::string detail;
};

int g_failed = 0;

void report(int id, const char* title, const Outcome& o) {
  std::printf("criterion %d %s: %s (%s)\n", id, o.pass ? "PASS" : "FAIL", title,
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++g_failed;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ScalarField random_field(const Grid& g, std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> d(-amp, amp);
  ScalarField u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = d(rng);
  return u;
}

Trajectory as_trajectory(const ExtinctionResult& r, const ScalarField& u0) {
  return Trajectory{r.times, {}, {}, {}, r.records, u0, DualField(u0.grid()), {}};
}

// 1. rof_prox against the exact 1D solver.
Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  const OracleBattery b = oracle_battery(64, 100, 1e-10, true);
  const double secs = seconds_since(t0);
  const bool ok = b.instances == 100 && b.all_converged && b.worst_error <= 1e-6 &&
                  b.worst_gap <= 1e-10 && secs < 10.0;
  return {ok, "100 instances, worst |err|_inf " + fmt("%.3g", b.worst_error) + ", worst gap " +
                  fmt("%.3g", b.worst_gap) + ", " + fmt("%.2f", secs) + " s"};
}

// 2. Extinction times of the indicator (1D) and the disc (2D).
Outcome extinction(Ledger& ledger, std::vector<Trajectory>& apriori_runs,
                   std::vector<SourceTerm>& apriori_sources) {
  const auto t0 = Clock::now();
  const RunSpec line = parse_config(
      "dimension = 1\nnx = 256\ntau = 1e-3\nt_end = 0.3\ninitial = indicator\n"
      "initial_lo_x = 0.3\ninitial_hi_x = 0.7\ngap_tol = 1e-10\nmax_iters = 1000000\n");
  const ExtinctionResult r1 = extinction_study(line);
  ledger.add("extinction-1d", r1.records, line.tolerances());
  apriori_runs.push_back(as_trajectory(r1, line.initial_field()));
  apriori_sources.push_back(line.source_term());

  const RunSpec disc = parse_config(
      "dimension = 2\nnx = 256\nny = 256\ntau = 1e-3\nt_end = 0.2\ninitial = disc\n"
      "initial_radius = 0.25\ntv_mode = isotropic\ngap_tol = 1e-4\nmax_iters = 200000\n");
  const ExtinctionResult r2 = extinction_study(disc);
  ledger.add("extinction-2d", r2.records, disc.tolerances());
  apriori_runs.push_back(as_trajectory(r2, disc.initial_field()));
  apriori_sources.push_back(disc.source_term());
  const double secs = seconds_since(t0);

  const double e1 = r1.extinction_time ? std::abs(*r1.extinction_time - 0.2) / 0.2 : INFINITY;
  const double e2 = r2.extinction_time ? std::abs(*r2.extinction_time - 0.125) / 0.125 : INFINITY;
  const bool ok = e1 <= 0.05 && e2 <= 0.10 && secs < 300.0;
  return {ok, "1D t*=" + fmt("%.4g", r1.extinction_time.value_or(NAN)) + " (rel err " +
                  fmt("%.3g", e1) + "), 2D t*=" + fmt("%.4g", r2.extinction_time.value_or(NAN)) +
                  " (rel err " + fmt("%.3g", e2) + "), " + fmt("%.1f", secs) + " s"};
}

// 4. A-priori and energy-estimate margins on random instances.
Outcome apriori(Ledger& ledger, std::vector<Trajectory>& runs, std::vector<SourceTerm>& sources) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> expo(-0.9, 0.5);
  for (int i = 0; i < 20; ++i) {
    const Grid g = i % 2 == 0 ? Grid::Line(32, 1.0) : Grid::Rectangle(8, 4, 1.0, 0.5);
    ProxConfig cfg;
    cfg.gap_tol = 1e-10;
    cfg.max_iters = 2000000;
    const ScalarField u0 = random_field(g, rng, 2.0);
    const SourceTerm f = SourceTerm::Separable(random_field(g, rng, 3.0),
                                               TimeProfile::Power(1.0, expo(rng)));
    Trajectory tr = run(u0, f, 0.05, 2.5e-3, cfg);
    ledger.add("apriori-" + std::to_string(i), tr.records,
               CertificateTolerances::FromGapTol(cfg.gap_tol, g));
    runs.push_back(std::move(tr));
    sources.push_back(f);
  }
  double worst_apriori = -INFINITY, worst_energy = -INFINITY;
  int fails = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const CertificateReport a = check_apriori(runs[i], sources[i]);
    const CertificateReport e = check_energy_estimate(runs[i], sources[i]);
    if (runs[i].step_count() > 0) {
      worst_apriori = std::max(worst_apriori, a.value);
      worst_energy = std::max(worst_energy, e.value);
    }
    fails += (a.pass ? 0 : 1) + (e.pass ? 0 : 1);
  }
  return {fails == 0, std::to_string(runs.size()) + " runs, worst a-priori margin " +
                          fmt("%.3g", worst_apriori) + ", worst energy margin " +
                          fmt("%.3g", worst_energy)};
}

// 5. L2 contraction and comparison.
Outcome contraction(Ledger& ledger) {
  std::mt19937_64 rng(77);
  ProxConfig cfg;
  cfg.gap_tol = 1e-11;
  cfg.max_iters = 5000000;
  int fails = 0;
  double worst_increase = -INFINITY, worst_cmp = -INFINITY;
  for (int i = 0; i < 30; ++i) {
    const bool same = i < 20;
    const Grid g = i % 2 == 0 ? Grid::Line(32, 1.0) : Grid::Rectangle(8, 8, 1.0, 1.0);
    const CertificateTolerances tol = CertificateTolerances::FromGapTol(cfg.gap_tol, g);
    const SourceTerm f1 = SourceTerm::Separable(random_field(g, rng, 2.0),
                                                TimeProfile::Power(1.0, -0.5));
    const SourceTerm f2 = same ? f1 : SourceTerm::Constant(random_field(g, rng, 2.0));
    const Trajectory a = run(random_field(g, rng, 1.0), f1, 0.04, 2e-3, cfg);
    const Trajectory b = run(random_field(g, rng, 1.0), f2, 0.04, 2e-3, cfg);
    ledger.add("contraction-" + std::to_string(i) + "a", a.records, tol);
    ledger.add("contraction-" + std::to_string(i) + "b", b.records, tol);
    const ContractionReport r = check_contraction(a, b, f1, f2, 1e-10);
    worst_cmp = std::max(worst_cmp, r.comparison.value);
    if (!r.comparison.pass) ++fails;
    if (same) {
      for (std::size_t k = 1; k < r.difference_norms.size(); ++k) {
        const double inc = r.difference_norms[k] - r.difference_norms[k - 1];
        worst_increase = std::max(worst_increase, inc);
        if (inc > 1e-10) ++fails;
      }
    }
  }
  return {fails == 0, "20 equal-source pairs, largest norm increase " +
                          fmt("%.3g", worst_increase) + "; 30 pairs, worst comparison value " +
                          fmt("%.3g", worst_cmp)};
}

// 6. Steklov averages.
Outcome steklov() {
  std::vector<double> t, v;
  for (int i = 0; i <= 4000; ++i) {
    t.push_back(i / 4000.0);
    v.push_back(1.0 + t.back() - 2.0 * t.back() * t.back() * t.back());
  }
  const TimeSeries smooth(t, v);
  const double eps[] = {0.1, 0.05, 0.025, 0.0125};
  const ConvergenceStudy s = l1_convergence_rate(smooth, eps);
  const bool slope_ok = s.slope >= 0.8 && s.slope <= 1.2;

  for (std::size_t i = 0; i < t.size(); ++i) v[i] = -3.0 * t[i] + 0.7;
  const TimeSeries lin(t, v);
  double lin_err = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double at = 0.1 + 0.8 * k / 100.0;
    lin_err = std::max(lin_err, std::abs(centered_average_at(lin, 0.1, at) - lin(at)));
  }
  const bool lin_ok = lin_err <= 1e-14;

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0), gap(0.005, 0.05);
  int dom_fail = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> ts{0.0}, vs{d(rng)};
    while (ts.back() < 1.0) {
      ts.push_back(ts.back() + gap(rng));
      vs.push_back(d(rng));
    }
    const TimeSeries series(ts, vs);
    const TimeSeries mag = abs(series);
    const Weight eta = trial % 2 ? Weight::One() : Weight::SmoothBump(0.05, 0.95);
    for (double e : eps) {
      for (double at : series.times()) {
        if (std::abs(backward_average_at(series, e, eta, at)) >
            backward_average_at(mag, e, eta, at) + 1e-14) {
          ++dom_fail;
        }
      }
    }
  }
  return {slope_ok && lin_ok && dom_fail == 0,
          "slope " + fmt("%.4f", s.slope) + ", affine error " + fmt("%.2g", lin_err) +
              ", domination violations " + std::to_string(dom_fail) + " on 50 series"};
}

// 7. Cauchy table over truncated singular sources.
Outcome mollification(Ledger& ledger) {
  const RunSpec spec = parse_config(
      "dimension = 1\nnx = 64\ntau = 1e-3\nt_end = 0.1\ninitial = zero\n"
      "source = separable\nsource_shape = bump\nsource_time = power\n"
      "source_exponent = -0.75\ngap_tol = 1e-11\nmax_iters = 5000000\n");
  const CauchyTable t = mollification_study(spec, {4, 8, 16, 32});
  ++ledger.runs;
  for (const auto& f : t.failures) ledger.failures.push_back("mollify: " + f.csv_row());
  bool within = true;
  std::string rows;
  for (const auto& r : t.rows) {
    within = within && r.max_difference <= r.source_bound;
    rows += " (" + fmt("%g", r.level_lo) + "," + fmt("%g", r.level_hi) + ")=" +
            fmt("%.3g", r.max_difference) + "<=" + fmt("%.3g", r.source_bound);
  }
  return {t.monotone && within && t.rows.size() == 6, "monotone " +
                                                          std::string(t.monotone ? "yes" : "no") +
                                                          ";" + rows};
}

// 8. Two CLI runs of the same config are bitwise identical.
Outcome determinism(const std::string& cli, const fs::path& work) {
  const std::string config =
      "dimension = 2\nnx = 32\nny = 24\nlength_y = 0.75\ntau = 2e-3\nt_end = 0.03\n"
      "initial = disc\ninitial_radius = 0.2\ninitial_center_y = 0.4\n"
      "source = separable\nsource_shape = indicator\nsource_time = power\n"
      "source_exponent = -0.5\ngap_tol = 1e-6\nmax_iters = 2000000\n";
  fs::create_directories(work);
  const fs::path cfg = work / "determinism.cfg";
  std::ofstream(cfg) << config;
  std::vector<fs::path> dirs{work / "det_1", work / "det_2"};
  for (const auto& d : dirs) {
    fs::remove_all(d);
    const std::string cmd = "\"" + cli + "\" run \"" + cfg.string() + "\" --output \"" +
                            d.string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) return {false, "cli run failed: " + cmd};
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  int files = 0, mismatches = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dirs[0])) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), dirs[0]);
    ++files;
    if (!fs::exists(dirs[1] / rel) || slurp(entry.path()) != slurp(dirs[1] / rel)) ++mismatches;
  }
  const std::string verify = "\"" + cli + "\" verify \"" + dirs[0].string() + "\" > /dev/null";
  const bool verified = std::system(verify.c_str()) == 0;
  return {files > 0 && mismatches == 0 && verified,
          std::to_string(files) + " files compared, " + std::to_string(mismatches) +
              " differ, verify " + (verified ? "passed" : "failed")};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: acceptance <tvflow-cli> <work-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path work = argv[2];
  Ledger ledger;
  std::vector<Trajectory> apriori_runs;
  std::vector<SourceTerm> apriori_sources;

  report(1, "oracle equivalence", oracle_equivalence());
  report(2, "extinction golden solutions", extinction(ledger, apriori_runs, apriori_sources));
  const Outcome a = apriori(ledger, apriori_runs, apriori_sources);
  const Outcome c = contraction(ledger);
  const Outcome s = steklov();
  const Outcome m = mollification(ledger);
  const Outcome d = determinism(cli, work);
  std::string cert = std::to_string(ledger.runs) + " runs, " + std::to_string(ledger.steps) +
                     " steps, " + std::to_string(ledger.failures.size()) + " failures";
  for (std::size_t i = 0; i < ledger.failures.size() && i < 5; ++i) {
    cert += "; " + ledger.failures[i];
  }
  report(3, "certificate suite", {ledger.failures.empty(), cert});
  report(4, "a-priori and energy bounds", a);
  report(5, "contraction and comparison", c);
  report(6, "Steklov battery", s);
  report(7, "mollification Cauchy study", m);
  report(8, "determinism", d);
  return g_failed == 0 ? 0 : 1;
}
