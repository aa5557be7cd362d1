#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "tvflow/io.hpp"

namespace tvflow {

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) +
                         (key.empty() ? std::string() : key + ": ") + message),
      line_(line),
      key_(std::move(key)) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Ctx {
  int line;
  std::string key;
  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(line, key, msg); }
};

long parse_int(const Ctx& c, std::string_view v) {
  long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    c.fail("expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

double parse_real(const Ctx& c, std::string_view v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) {
    c.fail("expected a finite real number, got '" + std::string(v) + "'");
  }
  return out;
}

bool parse_bool(const Ctx& c, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  c.fail("expected true or false, got '" + std::string(v) + "'");
}

double positive(const Ctx& c, double v) {
  if (!(v > 0.0)) c.fail("must be positive");
  return v;
}

template <typename E>
E parse_enum(const Ctx& c, std::string_view v,
             std::initializer_list<std::pair<std::string_view, E>> options) {
  std::string names;
  for (const auto& [name, value] : options) {
    if (v == name) return value;
    names += names.empty() ? "" : ", ";
    names += name;
  }
  c.fail("expected one of {" + names + "}, got '" + std::string(v) + "'");
}

ShapeSpec::Kind parse_shape(const Ctx& c, std::string_view v, bool allow_zero) {
  auto k = parse_enum<ShapeSpec::Kind>(c, v,
                                       {{"zero", ShapeSpec::Kind::kZero},
                                        {"indicator", ShapeSpec::Kind::kIndicator},
                                        {"disc", ShapeSpec::Kind::kDisc},
                                        {"bump", ShapeSpec::Kind::kBump},
                                        {"file", ShapeSpec::Kind::kFile}});
  if (!allow_zero && k == ShapeSpec::Kind::kZero) c.fail("a source shape cannot be zero");
  return k;
}

using Handler = std::function<void(RunSpec&, const Ctx&, std::string_view)>;

void add_shape_keys(std::map<std::string, Handler>& h, const std::string& prefix,
                    ShapeSpec RunSpec::*direct, bool is_source) {
  auto shape = [direct, is_source](RunSpec& s) -> ShapeSpec& {
    return is_source ? s.source.shape : s.*direct;
  };
  h[prefix + "_height"] = [shape](RunSpec& s, const Ctx& c, std::string_view v) {
    shape(s).height = parse_real(c, v);
  };
  h[prefix + "_radius"] = [shape](RunSpec& s, const Ctx& c, std::string_view v) {
    shape(s).radius = positive(c, parse_real(c, v));
  };
  h[prefix + "_file"] = [shape](RunSpec& s, const Ctx&, std::string_view v) {
    shape(s).path = std::string(v);
  };
  const char* axes[] = {"x", "y"};
  for (int a = 0; a < 2; ++a) {
    h[prefix + "_lo_" + axes[a]] = [shape, a](RunSpec& s, const Ctx& c, std::string_view v) {
      shape(s).lo[a] = parse_real(c, v);
    };
    h[prefix + "_hi_" + axes[a]] = [shape, a](RunSpec& s, const Ctx& c, std::string_view v) {
      shape(s).hi[a] = parse_real(c, v);
    };
    h[prefix + "_center_" + axes[a]] = [shape, a](RunSpec& s, const Ctx& c,
                                                  std::string_view v) {
      shape(s).center[a] = parse_real(c, v);
    };
  }
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = [] {
    std::map<std::string, Handler> h;
    h["dimension"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      const long d = parse_int(c, v);
      if (d != 1 && d != 2) c.fail("must be 1 or 2");
      s.dimension = static_cast<int>(d);
    };
    h["nx"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      const long n = parse_int(c, v);
      if (n < 2 || n > 1 << 20) c.fail("must be between 2 and 2^20");
      s.nx = static_cast<int>(n);
    };
    h["ny"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      const long n = parse_int(c, v);
      if (n < 2 || n > 1 << 20) c.fail("must be between 2 and 2^20");
      s.ny = static_cast<int>(n);
    };
    h["length_x"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.length_x = positive(c, parse_real(c, v));
    };
    h["length_y"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.length_y = positive(c, parse_real(c, v));
    };
    h["tau"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.tau = positive(c, parse_real(c, v));
    };
    h["t_end"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.t_end = positive(c, parse_real(c, v));
    };
    h["initial"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.initial.kind = parse_shape(c, v, true);
    };
    add_shape_keys(h, "initial", &RunSpec::initial, false);
    h["source"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.source.kind = parse_enum<SourceSpec::Kind>(c, v,
                                                   {{"zero", SourceSpec::Kind::kZero},
                                                    {"constant", SourceSpec::Kind::kConstant},
                                                    {"separable", SourceSpec::Kind::kSeparable}});
    };
    h["source_shape"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.source.shape.kind = parse_shape(c, v, false);
    };
    add_shape_keys(h, "source", &RunSpec::initial, true);
    h["source_time"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.source.time = parse_enum<SourceSpec::Time>(
          c, v, {{"constant", SourceSpec::Time::kConstant}, {"power", SourceSpec::Time::kPower}});
    };
    h["source_coef"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.source.coef = parse_real(c, v);
    };
    h["source_exponent"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      const double e = parse_real(c, v);
      if (!(e > -1.0)) c.fail("must exceed -1");
      s.source.exponent = e;
    };
    h["tv_mode"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.prox.mode = parse_enum<TvMode>(
          c, v, {{"isotropic", TvMode::kIsotropic}, {"anisotropic", TvMode::kAnisotropic}});
    };
    h["gap_tol"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.prox.gap_tol = positive(c, parse_real(c, v));
    };
    h["max_iters"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      const long n = parse_int(c, v);
      if (n < 1 || n > 2000000000L) c.fail("must be between 1 and 2e9");
      s.prox.max_iters = static_cast<int>(n);
    };
    h["dual_step"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      if (v == "auto") {
        s.prox.dual_step.reset();
      } else {
        s.prox.dual_step = positive(c, parse_real(c, v));
      }
    };
    h["warm_start"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.warm_start = parse_bool(c, v);
    };
    h["output"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      if (v.empty()) c.fail("must not be empty");
      s.output = std::string(v);
    };
    h["snapshot_every"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      const long n = parse_int(c, v);
      if (n < 0 || n > 2000000000L) c.fail("must be >= 0");
      s.snapshot_every = static_cast<int>(n);
    };
    h["violation_policy"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.policy = parse_enum<ViolationPolicy>(
          c, v, {{"abort", ViolationPolicy::kAbort}, {"warn", ViolationPolicy::kWarn}});
    };
    auto opt_tol = [](std::optional<double> RunSpec::*field) {
      return [field](RunSpec& s, const Ctx& c, std::string_view v) {
        if (v == "auto") {
          (s.*field).reset();
        } else {
          s.*field = positive(c, parse_real(c, v));
        }
      };
    };
    h["tol_equation"] = opt_tol(&RunSpec::tol_equation);
    h["tol_flatness"] = opt_tol(&RunSpec::tol_flatness);
    h["tol_boundary"] = opt_tol(&RunSpec::tol_boundary);
    h["tol_energy"] = opt_tol(&RunSpec::tol_energy);
    h["tol_green"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      s.tol_green = positive(c, parse_real(c, v));
    };
    h["extinction_threshold"] = opt_tol(&RunSpec::extinction_threshold);
    h["truncation_levels"] = [](RunSpec& s, const Ctx& c, std::string_view v) {
      std::vector<double> levels;
      std::size_t start = 0;
      while (start <= v.size()) {
        const auto comma = v.find(',', start);
        const auto item = trim(v.substr(start, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - start));
        levels.push_back(positive(c, parse_real(c, item)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      s.truncation_levels = std::move(levels);
    };
    return h;
  }();
  return table;
}

void check_shape(const ShapeSpec& sh, int dim, const std::map<std::string, int>& lines,
                 const std::string& prefix) {
  auto line_of = [&](const std::string& key) {
    auto it = lines.find(key);
    return it == lines.end() ? 0 : it->second;
  };
  const char* axes[] = {"x", "y"};
  if (sh.kind == ShapeSpec::Kind::kIndicator || sh.kind == ShapeSpec::Kind::kBump) {
    for (int a = 0; a < dim; ++a) {
      if (!(sh.lo[a] < sh.hi[a])) {
        const std::string key = prefix + "_hi_" + axes[a];
        throw ConfigError(line_of(key), key, "must exceed the matching _lo_ value");
      }
    }
  }
  if (sh.kind == ShapeSpec::Kind::kFile && sh.path.empty()) {
    const std::string key = prefix + "_file";
    throw ConfigError(line_of(prefix), key, "required when the shape is 'file'");
  }
}

}  // namespace

RunSpec parse_config(std::string_view text) {
  RunSpec spec;
  std::map<std::string, int> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "", "expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "", "missing key before '='");
    const auto it = handlers().find(key);
    if (it == handlers().end()) throw ConfigError(line_no, key, "unknown key");
    if (seen.count(key) != 0) {
      throw ConfigError(line_no, key,
                        "repeated key (first set on line " + std::to_string(seen[key]) + ")");
    }
    seen[key] = line_no;
    it->second(spec, Ctx{line_no, key}, value);
  }

  auto line_of = [&](const std::string& key) {
    auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  };
  if (spec.tau > spec.t_end * (1.0 + 1e-12)) {
    throw ConfigError(line_of("tau"), "tau", "must not exceed t_end");
  }
  check_shape(spec.initial, spec.dimension, seen, "initial");
  if (spec.source.kind != SourceSpec::Kind::kZero) {
    check_shape(spec.source.shape, spec.dimension, seen, "source");
  }
  if (spec.prox.dual_step) {
    const double bound = 1.0 / spec.grid().divergence_norm_sq_bound();
    if (*spec.prox.dual_step > bound * (1.0 + 1e-12)) {
      throw ConfigError(line_of("dual_step"), "dual_step",
                        "exceeds the stability bound 1/||div||^2 = " + format_double(bound));
    }
  }
  return spec;
}

RunSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot open config file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_reference() {
  return R"(Configuration keys (`key = value`, `#` starts a comment):
  dimension = 1              1 or 2
  nx = 64, ny = 64           cell counts (ny only in 2D)
  length_x = 1.0, length_y = 1.0
  tau = 0.001                time step
  t_end = 0.1                final time (>= tau)
  initial = zero             zero | indicator | disc | bump | file
    initial_height = 1.0
    initial_lo_x = 0.3, initial_hi_x = 0.7, initial_lo_y = 0.3, initial_hi_y = 0.7
    initial_center_x = 0.5, initial_center_y = 0.5, initial_radius = 0.25
    initial_file = <path to a TVF1 snapshot>
  source = zero              zero | constant | separable  (f = a(t) g(x))
    source_shape = bump      indicator | disc | bump | file, with source_* geometry
                             keys named like the initial_* ones
    source_time = constant   constant | power  (a(t) = source_coef * t^source_exponent)
    source_coef = 1.0, source_exponent = 0.0   (exponent > -1)
  tv_mode = isotropic        isotropic | anisotropic
  gap_tol = 1e-08            inner duality-gap threshold
  max_iters = 200000         inner iteration cap
  dual_step = auto           auto = 1/||div||^2
  warm_start = true
  output = out               output directory
  snapshot_every = 1         0 = first and last only
  violation_policy = abort   abort | warn
  tol_equation = auto        auto = 10 gap_tol
  tol_flatness = auto        auto = gap_tol
  tol_boundary = auto        auto = 10 gap_tol * boundary measure
  tol_energy = auto          auto = 10 gap_tol
  tol_green = 1e-10          relative
  truncation_levels = 4,8,16,32     (study-mollify)
  extinction_threshold = auto       (study-extinction; auto = smallest spacing)
)";
}

// ---------------------------------------------------------------------------

Grid RunSpec::grid() const {
  if (dimension == 1) return Grid::Line(nx, length_x);
  return Grid::Rectangle(nx, ny, length_x, length_y);
}

ScalarField make_field(const ShapeSpec& shape, const Grid& grid) {
  using K = ShapeSpec::Kind;
  if (shape.kind == K::kFile) {
    auto [u, t] = read_snapshot(std::filesystem::path(shape.path), grid);
    (void)t;
    return u;
  }
  ScalarField u(grid);
  const int dim = grid.dim();
  for (int i = 0; i < grid.n(0); ++i) {
    for (int j = 0; j < grid.n(1); ++j) {
      const double x[2] = {grid.center(0, i), dim == 2 ? grid.center(1, j) : 0.0};
      double v = 0.0;
      switch (shape.kind) {
        case K::kZero:
        case K::kFile:
          break;
        case K::kIndicator: {
          bool inside = true;
          for (int a = 0; a < dim; ++a) inside &= x[a] > shape.lo[a] && x[a] < shape.hi[a];
          v = inside ? shape.height : 0.0;
          break;
        }
        case K::kDisc: {
          double r2 = 0.0;
          for (int a = 0; a < dim; ++a) r2 += (x[a] - shape.center[a]) * (x[a] - shape.center[a]);
          v = r2 < shape.radius * shape.radius ? shape.height : 0.0;
          break;
        }
        case K::kBump: {
          v = shape.height;
          for (int a = 0; a < dim; ++a) {
            if (x[a] <= shape.lo[a] || x[a] >= shape.hi[a]) {
              v = 0.0;
              break;
            }
            const double s = std::sin(std::numbers::pi * (x[a] - shape.lo[a]) /
                                      (shape.hi[a] - shape.lo[a]));
            v *= s * s;
          }
          break;
        }
      }
      u[grid.cell(i, j)] = v;
    }
  }
  return u;
}

ScalarField RunSpec::initial_field() const { return make_field(initial, grid()); }

SourceTerm RunSpec::source_term() const {
  const Grid g = grid();
  switch (source.kind) {
    case SourceSpec::Kind::kZero:
      return SourceTerm::Zero(g);
    case SourceSpec::Kind::kConstant:
      return SourceTerm::Constant(make_field(source.shape, g));
    case SourceSpec::Kind::kSeparable:
      break;
  }
  TimeProfile a = source.time == SourceSpec::Time::kPower
                      ? TimeProfile::Power(source.coef, source.exponent)
                      : TimeProfile::Constant(source.coef);
  return SourceTerm::Separable(make_field(source.shape, g), std::move(a));
}

CertificateTolerances RunSpec::tolerances() const {
  CertificateTolerances t = CertificateTolerances::FromGapTol(prox.gap_tol, grid());
  if (tol_equation) t.equation = *tol_equation;
  if (tol_flatness) t.flatness = *tol_flatness;
  if (tol_boundary) t.boundary = *tol_boundary;
  if (tol_energy) t.energy = *tol_energy;
  t.green_rel = tol_green;
  return t;
}

RunOptions RunSpec::run_options() const {
  RunOptions o;
  o.snapshot_every = snapshot_every;
  o.warm_start = warm_start;
  o.policy = policy;
  o.tolerances = tolerances();
  return o;
}

}  // namespace tvflow
