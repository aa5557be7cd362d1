#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace tvflow {

// Piecewise-linear function of time through the samples (t_i, v_i), extended
// by zero outside [t_0, t_last].
class TimeSeries {
 public:
  TimeSeries(std::vector<double> t, std::vector<double> v);

  std::span<const double> times() const { return t_; }
  std::span<const double> values() const { return v_; }
  std::size_t size() const { return t_.size(); }
  double start() const { return t_.front(); }
  double horizon() const { return t_.back(); }

  double operator()(double t) const;
  // Exact integral of the zero-extended interpolant over [a, b].
  double integral(double a, double b) const;

  bool operator==(const TimeSeries&) const = default;

 private:
  std::vector<double> t_;
  std::vector<double> v_;
};

// |ts| as a function: zero crossings between samples become extra samples.
TimeSeries abs(const TimeSeries& ts);

// Nonnegative weight eta on the time axis.
struct Weight {
  enum class Kind { kOne, kSmoothBump };
  Kind kind = Kind::kOne;
  double a = 0.0;  // support of the bump
  double b = 0.0;

  static Weight One() { return {}; }
  // exp(1 - 1/(1 - x^2)) with x the position rescaled to (-1, 1) over (a, b);
  // zero outside, 1 at the midpoint.
  static Weight SmoothBump(double a, double b);

  double operator()(double s) const;
};

// (1/eps) * integral_{t-eps}^{t} eta(s) ts(s) ds, at one time.
double backward_average_at(const TimeSeries& ts, double eps, const Weight& eta,
                           double t);
// The same, sampled at the sample times of ts. Requires 0 < eps < horizon.
TimeSeries backward_average(const TimeSeries& ts, double eps,
                            const Weight& eta = Weight::One());

// (1/(2 eps)) * integral_{t-eps}^{t+eps} ts(s) ds.
double centered_average_at(const TimeSeries& ts, double eps, double t);
// Sampled at the sample times of ts. Requires 0 < eps < horizon / 2.
TimeSeries centered_average(const TimeSeries& ts, double eps);

struct ConvergencePoint {
  double eps;
  double l1_error;
};

struct ConvergenceStudy {
  std::vector<ConvergencePoint> points;
  double slope = 0.0;      // least-squares slope of log error against log eps
  bool monotone = false;   // errors strictly decrease along the eps list
};

// Exact L1 distance on [max eps, horizon] between the unweighted backward
// average and ts, for each eps (positive, strictly decreasing).
ConvergenceStudy l1_convergence_rate(const TimeSeries& ts, std::span<const double> eps);

// Centered averages at t for a sequence of shrinking windows. `limit` is the
// average at the smallest window, `spread` the change over the last two.
struct ApproximateLimit {
  std::vector<double> eps;
  std::vector<double> averages;
  double limit = 0.0;
  double spread = 0.0;
};
ApproximateLimit approximate_limit(const TimeSeries& ts, double t,
                                   std::span<const double> eps);

// bound[0] = sigma0, bound[k] = sigma0 + gains[0] + ... + gains[k-1].
std::vector<double> discrete_gronwall(double sigma0, std::span<const double> gains);

// Two-column CSV with header "t,value".
void write_csv(std::ostream& os, const TimeSeries& ts);
TimeSeries read_csv(std::istream& is);

}  // namespace tvflow
