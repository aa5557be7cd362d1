#include "tvflow/steklov.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tvflow {

TimeSeries::TimeSeries(std::vector<double> t, std::vector<double> v)
    : t_(std::move(t)), v_(std::move(v)) {
  if (t_.size() != v_.size()) {
    throw std::invalid_argument("time series: times and values differ in length");
  }
  if (t_.size() < 2) throw std::invalid_argument("time series: need at least 2 samples");
  if (t_.front() < 0.0) throw std::invalid_argument("time series: negative time");
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!std::isfinite(t_[i]) || !std::isfinite(v_[i])) {
      throw std::invalid_argument("time series: non-finite sample");
    }
    if (i > 0 && !(t_[i] > t_[i - 1])) {
      throw std::invalid_argument("time series: times must be strictly increasing");
    }
  }
}

double TimeSeries::operator()(double t) const {
  if (t < t_.front() || t > t_.back()) return 0.0;
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  if (it == t_.end()) return v_.back();
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double w = (t - t_[i]) / (t_[i + 1] - t_[i]);
  return (1.0 - w) * v_[i] + w * v_[i + 1];
}

double TimeSeries::integral(double a, double b) const {
  if (b < a) return -integral(b, a);
  a = std::max(a, t_.front());
  b = std::min(b, t_.back());
  if (!(b > a)) return 0.0;
  auto it = std::upper_bound(t_.begin(), t_.end(), a);
  std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  double s = 0.0;
  for (; i + 1 < t_.size() && t_[i] < b; ++i) {
    const double lo = std::max(a, t_[i]);
    const double hi = std::min(b, t_[i + 1]);
    if (hi > lo) s += 0.5 * (hi - lo) * ((*this)(lo) + (*this)(hi));
  }
  return s;
}

TimeSeries abs(const TimeSeries& ts) {
  std::vector<double> t, v;
  auto times = ts.times();
  auto vals = ts.values();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i > 0 && vals[i - 1] * vals[i] < 0.0) {
      const double w = vals[i - 1] / (vals[i - 1] - vals[i]);
      const double tc = times[i - 1] + w * (times[i] - times[i - 1]);
      if (tc > t.back() && tc < times[i]) {
        t.push_back(tc);
        v.push_back(0.0);
      }
    }
    t.push_back(times[i]);
    v.push_back(std::abs(vals[i]));
  }
  return TimeSeries(std::move(t), std::move(v));
}

Weight Weight::SmoothBump(double a, double b) {
  if (!(a >= 0.0) || !(b > a)) {
    throw std::invalid_argument("weight: bump support must satisfy 0 <= a < b");
  }
  return {Kind::kSmoothBump, a, b};
}

double Weight::operator()(double s) const {
  if (kind == Kind::kOne) return 1.0;
  if (s <= a || s >= b) return 0.0;
  const double x = (2.0 * s - a - b) / (b - a);
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

namespace {

void require_window(double eps, double limit, const char* what) {
  if (!(eps > 0.0) || !(eps < limit)) {
    throw std::invalid_argument(std::string(what) + ": window length out of range");
  }
}

// Integral of eta * ts over [a, b], split at the sample times so that each
// piece has a smooth integrand.
double weighted_integral(const TimeSeries& ts, const Weight& eta, double a, double b) {
  if (eta.kind == Weight::Kind::kOne) return ts.integral(a, b);
  a = std::max({a, ts.start(), eta.a});
  b = std::min({b, ts.horizon(), eta.b});
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (double t : ts.times()) {
    if (t > a && t < b) cuts.push_back(t);
  }
  cuts.push_back(b);
  auto f = [&](double s) { return eta(s) * ts(s); };
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    s += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, cuts[i], cuts[i + 1], 6, 1e-13);
  }
  return s;
}

// Exact integral of |q| over [a, b] for q quadratic, given q at a, the
// midpoint and b.
double integrate_abs_quadratic(double q0, double qm, double q1, double a, double b) {
  const double len = b - a;
  const double alpha = 2.0 * q1 - 4.0 * qm + 2.0 * q0;
  const double beta = 4.0 * qm - 3.0 * q0 - q1;
  const double gamma = q0;
  // Exact antiderivative in the unit variable.
  auto Q = [&](double s) { return ((alpha / 3.0 * s + beta / 2.0) * s + gamma) * s; };

  std::vector<double> cuts{0.0};
  const double scale = std::abs(alpha) + std::abs(beta) + std::abs(gamma);
  if (std::abs(alpha) > 1e-14 * scale) {
    const double disc = beta * beta - 4.0 * alpha * gamma;
    if (disc > 0.0) {
      const double r = std::sqrt(disc);
      const double qq = -0.5 * (beta + std::copysign(r, beta));
      for (double root : {qq / alpha, qq != 0.0 ? gamma / qq : 0.0}) {
        if (root > 0.0 && root < 1.0) cuts.push_back(root);
      }
    }
  } else if (std::abs(beta) > 0.0) {
    const double root = -gamma / beta;
    if (root > 0.0 && root < 1.0) cuts.push_back(root);
  }
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    s += std::abs(Q(cuts[i + 1]) - Q(cuts[i]));
  }
  return s * len;
}

}  // namespace

double backward_average_at(const TimeSeries& ts, double eps, const Weight& eta,
                           double t) {
  require_window(eps, ts.horizon(), "backward_average");
  return weighted_integral(ts, eta, t - eps, t) / eps;
}

TimeSeries backward_average(const TimeSeries& ts, double eps, const Weight& eta) {
  require_window(eps, ts.horizon(), "backward_average");
  std::vector<double> t(ts.times().begin(), ts.times().end());
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    v[i] = weighted_integral(ts, eta, t[i] - eps, t[i]) / eps;
  }
  return TimeSeries(std::move(t), std::move(v));
}

double centered_average_at(const TimeSeries& ts, double eps, double t) {
  require_window(eps, 0.5 * ts.horizon(), "centered_average");
  return ts.integral(t - eps, t + eps) / (2.0 * eps);
}

TimeSeries centered_average(const TimeSeries& ts, double eps) {
  require_window(eps, 0.5 * ts.horizon(), "centered_average");
  std::vector<double> t(ts.times().begin(), ts.times().end());
  std::vector<double> v(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    v[i] = ts.integral(t[i] - eps, t[i] + eps) / (2.0 * eps);
  }
  return TimeSeries(std::move(t), std::move(v));
}

ConvergenceStudy l1_convergence_rate(const TimeSeries& ts, std::span<const double> eps) {
  if (eps.empty()) throw std::invalid_argument("l1_convergence_rate: no windows");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    require_window(eps[i], ts.horizon(), "l1_convergence_rate");
    if (i > 0 && !(eps[i] < eps[i - 1])) {
      throw std::invalid_argument("l1_convergence_rate: windows must decrease");
    }
  }
  const double lo = eps.front();
  const double hi = ts.horizon();
  ConvergenceStudy out;
  for (double e : eps) {
    // A(t) - ts(t) is quadratic between consecutive points of
    // {t_i} U {t_i + e} U {lo, hi}.
    std::vector<double> cuts{lo, hi};
    for (double t : ts.times()) {
      if (t > lo && t < hi) cuts.push_back(t);
      if (t + e > lo && t + e < hi) cuts.push_back(t + e);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    auto err = [&](double t) { return ts.integral(t - e, t) / e - ts(t); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double a = cuts[i], b = cuts[i + 1];
      total += integrate_abs_quadratic(err(a), err(0.5 * (a + b)), err(b), a, b);
    }
    out.points.push_back({e, total});
  }

  out.monotone = true;
  for (std::size_t i = 1; i < out.points.size(); ++i) {
    if (!(out.points[i].l1_error < out.points[i - 1].l1_error)) out.monotone = false;
  }
  if (out.points.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    bool ok = true;
    for (const auto& p : out.points) {
      if (!(p.l1_error > 0.0)) ok = false;
    }
    if (ok) {
      const double m = static_cast<double>(out.points.size());
      for (const auto& p : out.points) {
        const double x = std::log(p.eps), y = std::log(p.l1_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
      }
      out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    } else {
      out.slope = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

ApproximateLimit approximate_limit(const TimeSeries& ts, double t,
                                   std::span<const double> eps) {
  if (eps.empty()) throw std::invalid_argument("approximate_limit: no windows");
  ApproximateLimit out;
  for (double e : eps) {
    out.eps.push_back(e);
    out.averages.push_back(centered_average_at(ts, e, t));
  }
  out.limit = out.averages.back();
  if (out.averages.size() >= 2) {
    out.spread = std::abs(out.averages.back() - out.averages[out.averages.size() - 2]);
  }
  return out;
}

std::vector<double> discrete_gronwall(double sigma0, std::span<const double> gains) {
  if (!(sigma0 >= 0.0)) throw std::invalid_argument("discrete_gronwall: negative sigma0");
  std::vector<double> bound{sigma0};
  bound.reserve(gains.size() + 1);
  for (double g : gains) {
    if (!(g >= 0.0)) throw std::invalid_argument("discrete_gronwall: negative gain");
    bound.push_back(bound.back() + g);
  }
  return bound;
}

void write_csv(std::ostream& os, const TimeSeries& ts) {
  os << "t,value\n";
  os << std::setprecision(17);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    os << ts.times()[i] << ',' << ts.values()[i] << '\n';
  }
}

TimeSeries read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "t,value") {
    throw std::runtime_error("time series csv: expected header 't,value'");
  }
  std::vector<double> t, v;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("time series csv: malformed row '" + line + "'");
    }
    std::size_t used = 0;
    const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
    try {
      t.push_back(std::stod(a, &used));
      if (used != a.size()) throw std::invalid_argument(a);
      v.push_back(std::stod(b, &used));
      if (used != b.size()) throw std::invalid_argument(b);
    } catch (const std::logic_error&) {
      throw std::runtime_error("time series csv: malformed row '" + line + "'");
    }
  }
  return TimeSeries(std::move(t), std::move(v));
}

}  // namespace tvflow
