#pragma once

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "tvflow/grid.hpp"
#include "tvflow/steklov.hpp"

namespace tvflow {

// Scalar time factor a(t) of a separable source a(t) g(x).
class TimeProfile {
 public:
  static TimeProfile Constant(double c);
  // coef * t^exponent for t > 0; exponent > -1 so the profile is integrable.
  static TimeProfile Power(double coef, double exponent);
  static TimeProfile Series(TimeSeries ts);

  double value(double t) const;
  // Exact integral of a over [t0, t1].
  double integral(double t0, double t1) const;
  // Exact integral of T_level(a(s) g) over [t0, t1].
  double truncated_integral(double g, double level, double t0, double t1) const;
  // Whether a is in L^2(0, t_end).
  bool square_integrable(double t_end) const;

 private:
  enum class Kind { kConstant, kPower, kSeries };
  Kind kind_ = Kind::kConstant;
  double coef_ = 0.0;
  double exponent_ = 0.0;
  std::optional<TimeSeries> series_;
};

enum class Integrability { kL2L2, kL1L2 };

// Right-hand side f(t, x).
class SourceTerm {
 public:
  enum class Kind { kZero, kConstant, kSeparable, kSampled };

  static SourceTerm Zero(const Grid& grid);
  static SourceTerm Constant(ScalarField g);
  static SourceTerm Separable(ScalarField g, TimeProfile a);
  // Frames at strictly increasing times; linear in time between frames and
  // zero outside the sampled range.
  static SourceTerm Sampled(std::vector<std::pair<double, ScalarField>> frames);

  Kind kind() const { return kind_; }
  const Grid& grid() const { return grid_; }
  Integrability integrability(double t_end) const;

  // The pointwise truncation T_level(f), applied before time averaging.
  SourceTerm truncated(double level) const;
  std::optional<double> truncation() const { return level_; }

  // (1 / (t1 - t0)) * integral_{t0}^{t1} f(s) ds.
  ScalarField average(double t0, double t1) const;

 private:
  explicit SourceTerm(Grid grid) : grid_(grid) {}

  Kind kind_ = Kind::kZero;
  Grid grid_;
  std::optional<ScalarField> profile_;
  std::optional<TimeProfile> time_;
  std::vector<std::pair<double, ScalarField>> frames_;
  std::optional<double> level_;
};

// Exact for zero, constant and separable sources; sampled frames integrate
// their piecewise-linear interpolant exactly (the trapezoid rule on the
// frames). Throws std::invalid_argument unless 0 <= t0 < t1.
ScalarField average_source(const SourceTerm& f, double t0, double t1);

}  // namespace tvflow
