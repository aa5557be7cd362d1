#include "tvflow/source.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tvflow {
namespace {

constexpr double kNoLevel = std::numeric_limits<double>::infinity();

// Integral over [0, len] of clamp(w(s), -k, k), w linear from w0 to w1.
double clipped_linear(double w0, double w1, double len, double k) {
  if (!(len > 0.0)) return 0.0;
  if (std::isinf(k)) return 0.5 * len * (w0 + w1);
  double cuts[4] = {0.0, 1.0, 0.0, 0.0};
  int nc = 2;
  if (w1 != w0) {
    for (double level : {k, -k}) {
      const double s = (level - w0) / (w1 - w0);
      if (s > 0.0 && s < 1.0) cuts[nc++] = s;
    }
  }
  std::sort(cuts, cuts + nc);
  double total = 0.0;
  for (int i = 0; i + 1 < nc; ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    const double ca = std::clamp(w0 + (w1 - w0) * a, -k, k);
    const double cb = std::clamp(w0 + (w1 - w0) * b, -k, k);
    total += 0.5 * (b - a) * (ca + cb);
  }
  return total * len;
}

double power_integral(double p, double a, double b) {
  if (!(b > a)) return 0.0;
  return (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / (p + 1.0);
}

// Integral over [t0, t1] of the zero-extended piecewise-linear function
// through (t_i, w_i), clamped to [-k, k].
double clipped_series(std::span<const double> t, std::span<const double> w, double k,
                      double t0, double t1) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double lo = std::max(t0, t[i]);
    const double hi = std::min(t1, t[i + 1]);
    if (!(hi > lo)) continue;
    const double span = t[i + 1] - t[i];
    const double wa = w[i] + (w[i + 1] - w[i]) * (lo - t[i]) / span;
    const double wb = w[i] + (w[i + 1] - w[i]) * (hi - t[i]) / span;
    total += clipped_linear(wa, wb, hi - lo, k);
  }
  return total;
}

}  // namespace

TimeProfile TimeProfile::Constant(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("time profile: non-finite constant");
  TimeProfile p;
  p.kind_ = Kind::kConstant;
  p.coef_ = c;
  return p;
}

TimeProfile TimeProfile::Power(double coef, double exponent) {
  if (!std::isfinite(coef) || !std::isfinite(exponent)) {
    throw std::invalid_argument("time profile: non-finite power law");
  }
  if (!(exponent > -1.0)) {
    throw std::invalid_argument("time profile: exponent must exceed -1 (integrability)");
  }
  TimeProfile p;
  p.kind_ = Kind::kPower;
  p.coef_ = coef;
  p.exponent_ = exponent;
  return p;
}

TimeProfile TimeProfile::Series(TimeSeries ts) {
  TimeProfile p;
  p.kind_ = Kind::kSeries;
  p.series_ = std::move(ts);
  return p;
}

double TimeProfile::value(double t) const {
  switch (kind_) {
    case Kind::kConstant:
      return coef_;
    case Kind::kPower:
      return coef_ * std::pow(t, exponent_);
    case Kind::kSeries:
      return (*series_)(t);
  }
  return 0.0;
}

double TimeProfile::integral(double t0, double t1) const {
  switch (kind_) {
    case Kind::kConstant:
      return coef_ * (t1 - t0);
    case Kind::kPower:
      return coef_ * power_integral(exponent_, t0, t1);
    case Kind::kSeries:
      return series_->integral(t0, t1);
  }
  return 0.0;
}

double TimeProfile::truncated_integral(double g, double level, double t0,
                                       double t1) const {
  if (!(level >= 0.0)) throw std::invalid_argument("truncated_integral: negative level");
  if (!(t1 > t0)) return 0.0;
  switch (kind_) {
    case Kind::kConstant:
      return std::clamp(coef_ * g, -level, level) * (t1 - t0);
    case Kind::kSeries: {
      auto t = series_->times();
      std::vector<double> w(series_->values().begin(), series_->values().end());
      for (double& x : w) x *= g;
      return clipped_series(t, w, level, t0, t1);
    }
    case Kind::kPower:
      break;
  }
  const double c = std::abs(coef_ * g);
  const double sign = coef_ * g < 0.0 ? -1.0 : 1.0;
  const double p = exponent_;
  if (c == 0.0 || level == 0.0) return 0.0;
  if (std::isinf(level)) return sign * c * power_integral(p, t0, t1);
  if (p == 0.0) return sign * std::min(c, level) * (t1 - t0);
  // c s^p crosses the level at s_star.
  const double s_star = std::pow(level / c, 1.0 / p);
  double clipped_lo, clipped_hi, free_lo, free_hi;
  if (p < 0.0) {  // decreasing: clipped on [t0, s_star]
    clipped_lo = t0;
    clipped_hi = std::clamp(s_star, t0, t1);
    free_lo = clipped_hi;
    free_hi = t1;
  } else {  // increasing: clipped on [s_star, t1]
    free_lo = t0;
    free_hi = std::clamp(s_star, t0, t1);
    clipped_lo = free_hi;
    clipped_hi = t1;
  }
  return sign * (level * (clipped_hi - clipped_lo) + c * power_integral(p, free_lo, free_hi));
}

bool TimeProfile::square_integrable(double t_end) const {
  (void)t_end;
  return kind_ != Kind::kPower || exponent_ > -0.5;
}

// ---------------------------------------------------------------------------

SourceTerm SourceTerm::Zero(const Grid& grid) {
  SourceTerm f(grid);
  f.kind_ = Kind::kZero;
  return f;
}

SourceTerm SourceTerm::Constant(ScalarField g) {
  SourceTerm f(g.grid());
  f.kind_ = Kind::kConstant;
  f.profile_ = std::move(g);
  return f;
}

SourceTerm SourceTerm::Separable(ScalarField g, TimeProfile a) {
  SourceTerm f(g.grid());
  f.kind_ = Kind::kSeparable;
  f.profile_ = std::move(g);
  f.time_ = std::move(a);
  return f;
}

SourceTerm SourceTerm::Sampled(std::vector<std::pair<double, ScalarField>> frames) {
  if (frames.size() < 2) throw std::invalid_argument("source: need at least 2 frames");
  const Grid grid = frames.front().second.grid();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    require_same_grid(grid, frames[i].second.grid(), "sampled source");
    if (!(frames[i].first >= 0.0) || (i > 0 && !(frames[i].first > frames[i - 1].first))) {
      throw std::invalid_argument("source: frame times must be nonnegative and increasing");
    }
  }
  SourceTerm f(grid);
  f.kind_ = Kind::kSampled;
  f.frames_ = std::move(frames);
  return f;
}

Integrability SourceTerm::integrability(double t_end) const {
  if (kind_ == Kind::kSeparable && !time_->square_integrable(t_end) && !level_) {
    return Integrability::kL1L2;
  }
  return Integrability::kL2L2;
}

SourceTerm SourceTerm::truncated(double level) const {
  if (!(level >= 0.0)) throw std::invalid_argument("source: truncation level must be >= 0");
  SourceTerm f = *this;
  f.level_ = level_ ? std::min(*level_, level) : level;
  return f;
}

ScalarField SourceTerm::average(double t0, double t1) const {
  if (!(t0 >= 0.0) || !(t1 > t0)) {
    throw std::invalid_argument("average_source: need 0 <= t0 < t1");
  }
  const double len = t1 - t0;
  const double k = level_.value_or(kNoLevel);
  ScalarField out(grid_);
  switch (kind_) {
    case Kind::kZero:
      break;
    case Kind::kConstant:
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::clamp((*profile_)[i], -k, k);
      }
      break;
    case Kind::kSeparable:
      if (!level_) {
        const double mean = time_->integral(t0, t1) / len;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*profile_)[i] * mean;
      } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
          out[i] = time_->truncated_integral((*profile_)[i], k, t0, t1) / len;
        }
      }
      break;
    case Kind::kSampled: {
      std::vector<double> t(frames_.size()), w(frames_.size());
      for (std::size_t j = 0; j < frames_.size(); ++j) t[j] = frames_[j].first;
      for (std::size_t i = 0; i < out.size(); ++i) {
        for (std::size_t j = 0; j < frames_.size(); ++j) w[j] = frames_[j].second[i];
        out[i] = clipped_series(t, w, k, t0, t1) / len;
      }
      break;
    }
  }
  return out;
}

ScalarField average_source(const SourceTerm& f, double t0, double t1) {
  return f.average(t0, t1);
}

}  // namespace tvflow
