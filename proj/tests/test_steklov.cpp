#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "tvflow/steklov.hpp"

using namespace tvflow;

namespace {

TimeSeries sample(double t_end, int n, const std::function<double(double)>& fn) {
  std::vector<double> t(n + 1), v(n + 1);
  for (int i = 0; i <= n; ++i) {
    t[i] = t_end * i / n;
    v[i] = fn(t[i]);
  }
  return TimeSeries(t, v);
}

TimeSeries random_series(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1.0, 1.0), gap(0.01, 0.1);
  std::vector<double> t{0.0}, v{d(rng)};
  while (t.back() < 1.0) {
    t.push_back(t.back() + gap(rng));
    v.push_back(d(rng));
  }
  return TimeSeries(t, v);
}

// Composite Simpson rule with many panels: an independent reference.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(TimeSeries, Validation) {
  EXPECT_THROW(TimeSeries({0.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(TimeSeries({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(TimeSeries({-1.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(TimeSeries({0.0, 1.0}, {1.0, NAN}), std::invalid_argument);
  EXPECT_THROW(TimeSeries({0.0, 1.0}, {1.0}), std::invalid_argument);
  const TimeSeries ts({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
  EXPECT_DOUBLE_EQ(ts(0.5), 1.0);
  EXPECT_EQ(ts(3.0), 0.0);
  EXPECT_DOUBLE_EQ(ts.integral(0.0, 2.0), 2.0);
  EXPECT_DOUBLE_EQ(ts.integral(-1.0, 5.0), 2.0);
}

TEST(TimeSeries, AbsInsertsCrossings) {
  const TimeSeries ts({0.0, 1.0}, {-1.0, 1.0});
  const TimeSeries a = abs(ts);
  EXPECT_DOUBLE_EQ(a(0.5), 0.0);
  EXPECT_DOUBLE_EQ(a(0.25), 0.5);
  EXPECT_DOUBLE_EQ(a.integral(0.0, 1.0), 0.5);
}

TEST(BackwardAverage, Constant) {
  const TimeSeries ts = sample(1.0, 50, [](double) { return 3.0; });
  const TimeSeries avg = backward_average(ts, 0.1);
  for (std::size_t i = 0; i < avg.size(); ++i) {
    if (avg.times()[i] >= 0.1) EXPECT_NEAR(avg.values()[i], 3.0, 1e-14);
  }
}

TEST(BackwardAverage, Linear) {
  const TimeSeries ts = sample(1.0, 40, [](double t) { return t; });
  const TimeSeries avg = backward_average(ts, 0.1);
  for (std::size_t i = 0; i < avg.size(); ++i) {
    const double t = avg.times()[i];
    if (t >= 0.1) EXPECT_NEAR(avg.values()[i], t - 0.05, 1e-14);
  }
  EXPECT_THROW(backward_average(ts, 0.0), std::invalid_argument);
  EXPECT_THROW(backward_average(ts, 1.5), std::invalid_argument);
}

TEST(BackwardAverage, ZeroExtensionBeforeStart) {
  const TimeSeries ts = sample(1.0, 10, [](double) { return 1.0; });
  EXPECT_NEAR(backward_average_at(ts, 0.2, Weight::One(), 0.05), 0.25, 1e-15);
}

TEST(BackwardAverage, BumpWeightMatchesSimpson) {
  const TimeSeries ts = sample(1.0, 37, [](double t) { return std::cos(5 * t) + t; });
  const Weight eta = Weight::SmoothBump(0.2, 0.8);
  EXPECT_DOUBLE_EQ(eta(0.5), 1.0);
  EXPECT_EQ(eta(0.1), 0.0);
  EXPECT_EQ(eta(0.9), 0.0);
  EXPECT_THROW(Weight::SmoothBump(0.5, 0.5), std::invalid_argument);
  for (double t : {0.25, 0.5, 0.63, 0.85}) {
    const double eps = 0.1;
    const double ref =
        simpson([&](double s) { return eta(s) * ts(s); }, t - eps, t) / eps;
    EXPECT_NEAR(backward_average_at(ts, eps, eta, t), ref, 1e-10);
  }
}

TEST(BackwardAverage, LinearAndMonotone) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const TimeSeries a = random_series(rng), b = random_series(rng);
    for (double t : {0.1, 0.37, 0.8}) {
      const double ea = backward_average_at(a, 0.05, Weight::One(), t);
      const double eb = backward_average_at(b, 0.05, Weight::One(), t);
      const double sum = simpson([&](double s) { return 2.0 * a(s) - b(s); }, t - 0.05, t, 200000);
      EXPECT_NEAR(2.0 * ea - eb, sum / 0.05, 1e-6);
    }
    // Ordered inputs give ordered averages.
    const TimeSeries upper = abs(a);
    for (double t : {0.1, 0.5, 0.9}) {
      EXPECT_LE(backward_average_at(a, 0.07, Weight::One(), t),
                backward_average_at(upper, 0.07, Weight::One(), t) + 1e-15);
    }
  }
}

TEST(BackwardAverage, DominationOnRandomSeries) {
  std::mt19937_64 rng(2);
  const Weight eta = Weight::SmoothBump(0.1, 0.9);
  for (int trial = 0; trial < 50; ++trial) {
    const TimeSeries ts = random_series(rng);
    const TimeSeries a = abs(ts);
    for (int k = 1; k <= 40; ++k) {
      const double t = 0.025 * k;
      EXPECT_LE(std::abs(backward_average_at(ts, 0.05, eta, t)),
                backward_average_at(a, 0.05, eta, t) + 1e-14);
    }
  }
}

TEST(CenteredAverage, ReproducesAffine) {
  const TimeSeries lin = sample(1.0, 30, [](double t) { return 2.0 * t - 0.3; });
  const TimeSeries avg = centered_average(lin, 0.1);
  for (std::size_t i = 0; i < avg.size(); ++i) {
    const double t = avg.times()[i];
    if (t >= 0.1 - 1e-12 && t <= 0.9 + 1e-12) EXPECT_NEAR(avg.values()[i], lin(t), 1e-14);
  }
  const TimeSeries c = sample(1.0, 30, [](double) { return -4.0; });
  EXPECT_NEAR(centered_average_at(c, 0.2, 0.5), -4.0, 1e-14);
  EXPECT_THROW(centered_average(lin, 0.6), std::invalid_argument);
}

TEST(CenteredAverage, QuadraticGainsEpsSquaredOverThree) {
  const int n = 1000;
  const TimeSeries sq = sample(1.0, n, [](double t) { return t * t; });
  // The interpolant overshoots t^2 by at most h^2/4.
  const double h = 1.0 / n;
  EXPECT_NEAR(centered_average_at(sq, 0.3, 0.5), 0.28, h * h / 4.0);
}

TEST(L1Rate, SmoothSeriesSlopeNearOne) {
  const TimeSeries ts = sample(1.0, 2000, [](double t) { return 1.0 + t - 2.0 * t * t * t; });
  const double eps[] = {0.1, 0.05, 0.025, 0.0125};
  const ConvergenceStudy s = l1_convergence_rate(ts, eps);
  ASSERT_EQ(s.points.size(), 4u);
  EXPECT_GE(s.slope, 0.8);
  EXPECT_LE(s.slope, 1.2);
  EXPECT_TRUE(s.monotone);
}

TEST(L1Rate, ConstantIsExact) {
  const TimeSeries ts = sample(1.0, 10, [](double) { return 2.0; });
  const double eps[] = {0.2, 0.1, 0.05};
  for (const auto& p : l1_convergence_rate(ts, eps).points) EXPECT_LE(p.l1_error, 1e-14);
}

TEST(L1Rate, StepHalfJumpTimesEps) {
  const double jump = 1.5;
  const TimeSeries ts({0.0, 0.5, 0.5 + 1e-9, 1.0}, {0.0, 0.0, jump, jump});
  const double eps[] = {0.1, 0.05, 0.025};
  for (const auto& p : l1_convergence_rate(ts, eps).points) {
    EXPECT_NEAR(p.l1_error, jump * p.eps / 2.0, 1e-9);
  }
  const double bad[] = {0.05, 0.1};
  EXPECT_THROW(l1_convergence_rate(ts, bad), std::invalid_argument);
}

TEST(ApproximateLimit, ContinuousPoint) {
  const TimeSeries ts = sample(1.0, 10000, [](double t) { return std::sin(3 * t); });
  const double eps[] = {0.1, 0.01, 0.001};
  const ApproximateLimit l = approximate_limit(ts, 0.4, eps);
  // Centered window bias is eps^2 |f''| / 6 <= 1.5e-6.
  EXPECT_NEAR(l.limit, ts(0.4), 2e-6);
  EXPECT_EQ(l.averages.size(), 3u);
}

TEST(Gronwall, Examples) {
  const double g1[] = {0.5};
  EXPECT_EQ(discrete_gronwall(2.0, g1), (std::vector<double>{2.0, 2.5}));
  const double g0[] = {0.0, 0.0, 0.0};
  EXPECT_EQ(discrete_gronwall(1.5, g0), (std::vector<double>{1.5, 1.5, 1.5, 1.5}));
  const double g2[] = {0.1, 0.2};
  const auto b = discrete_gronwall(1.0, g2);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_DOUBLE_EQ(b[1], 1.1);
  EXPECT_DOUBLE_EQ(b[2], 1.3);
  const double neg[] = {0.1, -0.2};
  EXPECT_THROW(discrete_gronwall(1.0, neg), std::invalid_argument);
  EXPECT_THROW(discrete_gronwall(-1.0, g1), std::invalid_argument);
}

TEST(TimeSeriesCsv, RoundTrip) {
  std::mt19937_64 rng(3);
  const TimeSeries ts = random_series(rng);
  std::stringstream ss;
  write_csv(ss, ts);
  EXPECT_EQ(ss.str().substr(0, 8), "t,value\n");
  EXPECT_TRUE(read_csv(ss) == ts);
  std::stringstream bad("time,v\n0,1\n1,2\n");
  EXPECT_THROW(read_csv(bad), std::runtime_error);
}
