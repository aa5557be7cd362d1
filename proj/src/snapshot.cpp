#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "tvflow/io.hpp"

namespace tvflow {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void write_rows(std::ostream& os, std::span<const double> v, int rows, int cols) {
  for (int r = 0; r < rows; ++r) {
    os << '\n';
    for (int c = 0; c < cols; ++c) {
      if (c > 0) os << ',';
      os << format_double(v[static_cast<std::size_t>(r) * cols + c]);
    }
  }
}

std::string header_of(const char* tag, const Grid& g, double t) {
  std::string h = tag;
  h += ' ' + std::to_string(g.dim());
  for (int a = 0; a < g.dim(); ++a) h += ' ' + std::to_string(g.n(a));
  return h + ' ' + format_double(t);
}

double parse_number(std::string_view s, const char* what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
    throw SnapshotFormatError(std::string(what) + ": malformed number '" + std::string(s) + "'");
  }
  return v;
}

struct Parsed {
  int dim = 0;
  int n[2] = {1, 1};
  double t = 0.0;
  std::vector<std::string_view> lines;  // body lines
};

Parsed parse_text(const std::string& text, const char* tag) {
  Parsed out;
  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (true) {
    const auto nl = rest.find('\n');
    lines.push_back(rest.substr(0, nl));
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  if (lines.size() > 1 && lines.back().empty()) lines.pop_back();
  for (auto& l : lines) {
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  }

  std::istringstream hs{std::string(lines[0])};
  std::string magic;
  hs >> magic;
  if (magic.size() == 4 && magic.compare(0, 3, std::string(tag, 3)) == 0 && magic != tag) {
    throw SnapshotFormatError("unsupported format version '" + magic + "', expected " + tag);
  }
  if (magic != tag) throw SnapshotFormatError(std::string("malformed header: expected ") + tag);
  std::vector<std::string> tokens{std::istream_iterator<std::string>(hs), {}};
  if (tokens.empty()) throw SnapshotFormatError("malformed header: missing dimension");
  out.dim = static_cast<int>(parse_number(tokens[0], "header"));
  if ((out.dim != 1 && out.dim != 2) || tokens[0].find_first_not_of("0123456789") != std::string::npos) {
    throw SnapshotFormatError("malformed header: dimension must be 1 or 2");
  }
  if (tokens.size() != static_cast<std::size_t>(out.dim) + 2) {
    throw SnapshotFormatError("malformed header: expected " + std::to_string(out.dim + 2) +
                              " fields after " + tag);
  }
  for (int a = 0; a < out.dim; ++a) {
    const std::string& tok = tokens[1 + a];
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
      throw SnapshotFormatError("malformed header: bad cell count '" + tok + "'");
    }
    out.n[a] = std::stoi(tok);
  }
  out.t = parse_number(tokens.back(), "header time");
  out.lines.assign(lines.begin() + 1, lines.end());
  return out;
}

void read_rows(const std::vector<std::string_view>& lines, std::size_t first, int rows,
               int cols, std::vector<double>& out) {
  if (lines.size() < first + rows) {
    throw SnapshotFormatError("count mismatch: expected " + std::to_string(rows) + " rows");
  }
  for (int r = 0; r < rows; ++r) {
    std::string_view line = lines[first + r];
    int count = 0;
    while (true) {
      const auto comma = line.find(',');
      out.push_back(parse_number(line.substr(0, comma), "value"));
      ++count;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (count != cols) {
      throw SnapshotFormatError("count mismatch: row " + std::to_string(r + 1) + " has " +
                                std::to_string(count) + " values, expected " +
                                std::to_string(cols));
    }
  }
}

Grid grid_for(const Parsed& p, const std::optional<Grid>& grid) {
  if (grid) {
    if (grid->dim() != p.dim || grid->n(0) != p.n[0] || (p.dim == 2 && grid->n(1) != p.n[1])) {
      throw SnapshotFormatError("count mismatch: file shape differs from the grid");
    }
    return *grid;
  }
  if (p.n[0] < 2 || p.n[1] < (p.dim == 2 ? 2 : 1)) {
    throw SnapshotFormatError("malformed header: at least 2 cells per axis required");
  }
  return p.dim == 1 ? Grid::Line(p.n[0], 1.0) : Grid::Rectangle(p.n[0], p.n[1], 1.0, 1.0);
}

std::string slurp(std::istream& is) {
  return std::string(std::istreambuf_iterator<char>(is), {});
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

std::string step_name(const char* prefix, int step, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%06d.%s", prefix, step, ext);
  return buf;
}

}  // namespace

void write_snapshot(std::ostream& os, const ScalarField& u, double t) {
  const Grid& g = u.grid();
  os << header_of("TVF1", g, t);
  if (g.dim() == 1) {
    write_rows(os, u.values(), 1, g.n(0));
  } else {
    write_rows(os, u.values(), g.n(0), g.n(1));
  }
}

void write_snapshot(const ScalarField& u, double t, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_snapshot(out, u, t);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::pair<ScalarField, double> read_snapshot(std::istream& is, const std::optional<Grid>& grid) {
  const std::string text = slurp(is);
  const Parsed p = parse_text(text, "TVF1");
  const Grid g = grid_for(p, grid);
  std::vector<double> values;
  values.reserve(g.cell_count());
  const int rows = p.dim == 1 ? 1 : p.n[0];
  const int cols = p.dim == 1 ? p.n[0] : p.n[1];
  read_rows(p.lines, 0, rows, cols, values);
  if (p.lines.size() != static_cast<std::size_t>(rows)) {
    throw SnapshotFormatError("count mismatch: trailing rows after the field");
  }
  return {ScalarField(g, std::move(values)), p.t};
}

std::pair<ScalarField, double> read_snapshot(const std::filesystem::path& path,
                                             const std::optional<Grid>& grid) {
  auto in = open_in(path);
  return read_snapshot(in, grid);
}

void write_dual(std::ostream& os, const DualField& z, double t) {
  const Grid& g = z.grid();
  os << header_of("TVD1", g, t);
  if (g.dim() == 1) {
    write_rows(os, z.component(0), 1, g.n(0) + 1);
    return;
  }
  write_rows(os, z.component(0), g.n(0) + 1, g.n(1));
  write_rows(os, z.component(1), g.n(0), g.n(1) + 1);
}

std::pair<DualField, double> read_dual(std::istream& is, const Grid& grid) {
  const std::string text = slurp(is);
  const Parsed p = parse_text(text, "TVD1");
  const Grid g = grid_for(p, grid);
  DualField z(g);
  std::vector<double> a, b;
  std::size_t used = 0;
  if (g.dim() == 1) {
    read_rows(p.lines, 0, 1, g.n(0) + 1, a);
    used = 1;
  } else {
    read_rows(p.lines, 0, g.n(0) + 1, g.n(1), a);
    read_rows(p.lines, g.n(0) + 1, g.n(0), g.n(1) + 1, b);
    used = 2 * static_cast<std::size_t>(g.n(0)) + 1;
  }
  if (p.lines.size() != used) throw SnapshotFormatError("count mismatch: trailing rows");
  std::copy(a.begin(), a.end(), z.component(0).begin());
  std::copy(b.begin(), b.end(), z.component(1).begin());
  return {std::move(z), p.t};
}

const char* diagnostics_header() {
  return "step,t,l2_sq,tv,boundary_term,source_pairing,energy_residual,duality_gap,"
         "flatness_gap,boundary_violation,green_residual,inner_iters";
}

std::string diagnostics_row(const StepRecord& r) {
  std::string s = std::to_string(r.step);
  for (double v : {r.t, 2.0 * r.half_l2_next, r.tv_next, r.boundary_term, r.source_pairing,
                   r.energy_residual, r.duality_gap, r.flatness_gap, r.boundary_violation,
                   r.green_residual}) {
    s += ',' + format_double(v);
  }
  return s + ',' + std::to_string(r.inner_iterations);
}

std::filesystem::path RunLayout::snapshot(int step) const {
  return root / "snapshots" / step_name("u", step, "tvf");
}

std::filesystem::path RunLayout::dual(int step) const {
  return root / "snapshots" / step_name("z", step, "tvd");
}

RunOutcome run_to_directory(const RunSpec& spec, const std::string& config_text,
                            const std::filesystem::path& out_dir) {
  const RunLayout layout{out_dir};
  std::filesystem::create_directories(out_dir / "snapshots");
  {
    auto cfg = open_out(layout.config());
    cfg << config_text;
  }
  const ScalarField u0 = spec.initial_field();
  const SourceTerm f = spec.source_term();
  const std::vector<double> times = time_schedule(spec.t_end, spec.tau);
  const int steps = static_cast<int>(times.size()) - 1;
  write_snapshot(u0, 0.0, layout.snapshot(0));

  auto diag = open_out(layout.diagnostics());
  diag << diagnostics_header() << '\n' << std::flush;
  std::vector<StepRecord> records;

  RunOptions opts = spec.run_options();
  opts.on_step = [&](const StepRecord& rec, const ScalarField& u, const DualField& z) {
    diag << diagnostics_row(rec) << '\n' << std::flush;
    records.push_back(rec);
    const bool snap = (spec.snapshot_every > 0 && rec.step % spec.snapshot_every == 0) ||
                      rec.step == steps;
    if (snap) {
      write_snapshot(u, rec.t, layout.snapshot(rec.step));
      auto zo = open_out(layout.dual(rec.step));
      write_dual(zo, z, rec.t);
    }
  };

  RunOutcome outcome;
  try {
    outcome.trajectory = run(u0, f, spec.t_end, spec.tau, spec.prox, opts);
  } catch (const RunAborted& e) {
    outcome.aborted = e.what();
  }
  outcome.records = records;

  const CertificateTolerances tol = spec.tolerances();
  auto certs = open_out(layout.certificates());
  certs << CertificateReport::csv_header() << '\n';
  for (const auto& rec : records) {
    for (const auto& rep : step_certificates(rec, tol)) {
      certs << rep.csv_row() << '\n';
      if (!rep.pass) outcome.failures.push_back(rep);
    }
  }
  if (outcome.trajectory) {
    for (const auto& rep : {check_apriori(*outcome.trajectory, f),
                            check_energy_estimate(*outcome.trajectory, f)}) {
      certs << rep.csv_row() << '\n';
      if (!rep.pass) outcome.failures.push_back(rep);
    }
  }
  return outcome;
}

VerifyOutcome verify_directory(const std::filesystem::path& dir) {
  const RunLayout layout{dir};
  std::string text;
  {
    auto in = open_in(layout.config());
    text = slurp(in);
  }
  const RunSpec spec = parse_config(text);
  const Grid grid = spec.grid();
  const SourceTerm f = spec.source_term();
  const std::vector<double> times = time_schedule(spec.t_end, spec.tau);
  const int steps = static_cast<int>(times.size()) - 1;
  const CertificateTolerances tol = spec.tolerances();
  VerifyOutcome out;
  auto record = [&out](CertificateReport rep, long at = -2) {
    if (at != -2) rep.location = at;
    if (!rep.pass) out.failures.push_back(rep);
    out.reports.push_back(std::move(rep));
  };

  auto [u0, t0] = read_snapshot(layout.snapshot(0), grid);
  {
    double diff = std::abs(t0);
    const ScalarField expected = spec.initial_field();
    for (std::size_t i = 0; i < u0.size(); ++i) diff = std::max(diff, std::abs(u0[i] - expected[i]));
    record(CertificateReport::Make("initial_state", diff, 0.0, 0));
  }

  // Trajectory with one record per step, filled when every snapshot exists.
  Trajectory traj{times, {}, {}, {}, {}, u0, DualField(grid), {}};
  bool complete = true;
  std::optional<ScalarField> prev = u0;
  for (int k = 1; k <= steps; ++k) {
    if (!std::filesystem::exists(layout.snapshot(k))) {
      prev.reset();
      complete = false;
      continue;
    }
    auto [u, t] = read_snapshot(layout.snapshot(k), grid);
    auto zin = open_in(layout.dual(k));
    auto [z, tz] = read_dual(zin, grid);
    const double tdiff = std::max(std::abs(t - times[k]), std::abs(tz - times[k]));
    record(CertificateReport::Make("snapshot_time", tdiff, 0.0, k));
    if (max_group_norm(z, spec.prox.mode) > 1.0 + 1e-12) {
      record(CertificateReport::Make("dual_feasibility", max_group_norm(z, spec.prox.mode) - 1.0,
                                     1e-12, k));
      prev.reset();
      complete = false;
      continue;
    }
    if (prev) {
      const ScalarField fk = f.average(times[k - 1], times[k]);
      StepRecord rec = energy_ledger(*prev, u, z, fk, times[k] - times[k - 1], spec.prox.mode);
      rec.step = k;
      rec.t = times[k];
      for (auto& rep : step_certificates(rec, tol)) record(std::move(rep));
      traj.records.push_back(rec);
      ++out.steps_checked;
    } else {
      record(check_flatness(u, z, spec.prox.mode, tol.flatness), k);
      record(check_boundary_sign(u, z, tol.boundary), k);
      record(check_green(z, u, tol.green_rel), k);
    }
    prev = std::move(u);
  }
  if (complete && steps > 0) {
    record(check_apriori(traj, f));
    record(check_energy_estimate(traj, f));
  }
  return out;
}

}  // namespace tvflow
