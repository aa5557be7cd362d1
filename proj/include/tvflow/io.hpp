#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tvflow/certificates.hpp"
#include "tvflow/grid.hpp"
#include "tvflow/prox.hpp"
#include "tvflow/source.hpp"
#include "tvflow/stepper.hpp"

namespace tvflow {

// Parse failure that names the offending line and key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& message);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

// Spatial profile used for initial data and source profiles.
struct ShapeSpec {
  enum class Kind { kZero, kIndicator, kDisc, kBump, kFile };
  Kind kind = Kind::kZero;
  double height = 1.0;
  double lo[2] = {0.3, 0.3};
  double hi[2] = {0.7, 0.7};
  double center[2] = {0.5, 0.5};
  double radius = 0.25;
  std::string path;
};

inline ShapeSpec bump_shape() {
  ShapeSpec s;
  s.kind = ShapeSpec::Kind::kBump;
  return s;
}

ScalarField make_field(const ShapeSpec& shape, const Grid& grid);

struct SourceSpec {
  enum class Kind { kZero, kConstant, kSeparable };
  enum class Time { kConstant, kPower };
  Kind kind = Kind::kZero;
  ShapeSpec shape = bump_shape();
  Time time = Time::kConstant;
  double coef = 1.0;
  double exponent = 0.0;
};

struct RunSpec {
  int dimension = 1;
  int nx = 64;
  int ny = 64;
  double length_x = 1.0;
  double length_y = 1.0;
  ShapeSpec initial;
  SourceSpec source;
  double tau = 1e-3;
  double t_end = 0.1;
  ProxConfig prox;
  std::string output = "out";
  int snapshot_every = 1;
  bool warm_start = true;
  ViolationPolicy policy = ViolationPolicy::kAbort;
  std::optional<double> tol_equation, tol_flatness, tol_boundary, tol_energy;
  double tol_green = 1e-10;
  std::vector<double> truncation_levels{4, 8, 16, 32};
  std::optional<double> extinction_threshold;  // default: smallest spacing

  Grid grid() const;
  ScalarField initial_field() const;
  SourceTerm source_term() const;
  CertificateTolerances tolerances() const;
  RunOptions run_options() const;
};

// Line-oriented `key = value` text with `#` comments. Unknown keys, repeated
// keys, malformed values and out-of-range values raise ConfigError.
RunSpec parse_config(std::string_view text);
RunSpec load_config(const std::filesystem::path& path);
// Every key with its default, for --help.
std::string config_reference();

// TVF1 snapshot: header `TVF1 <dim> <n...> <t>`, then one comma-separated row
// per line (a 1D field is one row; a 2D field has n0 rows of n1 values),
// 17 significant digits, no trailing newline.
void write_snapshot(std::ostream& os, const ScalarField& u, double t);
void write_snapshot(const ScalarField& u, double t, const std::filesystem::path& path);
// Without `grid`, spacings default to a unit box; with it, counts must match.
std::pair<ScalarField, double> read_snapshot(std::istream& is,
                                             const std::optional<Grid>& grid = {});
std::pair<ScalarField, double> read_snapshot(const std::filesystem::path& path,
                                             const std::optional<Grid>& grid = {});

// Dual fields use the same layout with header `TVD1`. In 1D the n + 1 face
// values form one row; in 2D axis-0 faces follow as n0 + 1 rows of n1
// values, then axis-1 faces as n0 rows of n1 + 1 values.
void write_dual(std::ostream& os, const DualField& z, double t);
std::pair<DualField, double> read_dual(std::istream& is, const Grid& grid);

class SnapshotFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Diagnostics CSV, one row per step.
const char* diagnostics_header();
std::string diagnostics_row(const StepRecord& r);

std::string format_double(double v);  // %.17g

// Output directory layout written by `run` and read by `verify`.
struct RunLayout {
  std::filesystem::path root;
  std::filesystem::path config() const { return root / "config.txt"; }
  std::filesystem::path diagnostics() const { return root / "diagnostics.csv"; }
  std::filesystem::path certificates() const { return root / "certificates.csv"; }
  std::filesystem::path snapshot(int step) const;
  std::filesystem::path dual(int step) const;
};

struct RunOutcome {
  std::optional<Trajectory> trajectory;  // empty when the run aborted
  std::vector<StepRecord> records;       // every completed step
  std::vector<CertificateReport> failures;  // empty when everything passed
  std::optional<std::string> aborted;       // abort reason, if any
};

// Executes a run and writes the output directory (diagnostics flushed per
// step, so an aborted run still leaves its rows behind).
RunOutcome run_to_directory(const RunSpec& spec, const std::string& config_text,
                            const std::filesystem::path& out_dir);

// Re-evaluates every certificate from the files in a run directory.
struct VerifyOutcome {
  std::vector<CertificateReport> reports;
  std::vector<CertificateReport> failures;
  int steps_checked = 0;
};
VerifyOutcome verify_directory(const std::filesystem::path& dir);

}  // namespace tvflow
