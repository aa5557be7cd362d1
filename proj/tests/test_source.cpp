#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "tvflow/source.hpp"

using namespace tvflow;

namespace {

ScalarField profile() {
  return ScalarField(Grid::Line(4, 1.0), {0.5, -2.0, 0.0, 3.0});
}

// Reference value of (1/(t1-t0)) int T_k(a(s) g) ds by tanh-sinh quadrature.
double reference(double coef, double p, double g, double level, double t0, double t1) {
  boost::math::quadrature::tanh_sinh<double> q;
  const auto f = [&](double s) {
    const double v = coef * std::pow(s, p) * g;
    return std::isfinite(level) ? std::clamp(v, -level, level) : v;
  };
  // Split at the crossing so the integrand is smooth on each piece.
  double cut = t0;
  if (std::isfinite(level) && coef * g != 0.0) {
    cut = std::clamp(std::pow(level / std::abs(coef * g), 1.0 / p), t0, t1);
  }
  double total = 0.0;
  if (cut > t0) total += q.integrate(f, t0, cut);
  if (t1 > cut) total += q.integrate(f, cut, t1);
  return total / (t1 - t0);
}

}  // namespace

TEST(Source, ZeroAndConstant) {
  const SourceTerm zero = SourceTerm::Zero(Grid::Line(4, 1.0));
  EXPECT_EQ(max_abs(zero.average(0.0, 0.3)), 0.0);
  const SourceTerm c = SourceTerm::Constant(profile());
  EXPECT_TRUE(c.average(0.2, 0.7) == profile());
  EXPECT_TRUE(average_source(c, 0.0, 1e-6) == profile());
}

TEST(Source, SeparableLinearProfile) {
  // a(t) = t on [0, tau] averages to tau/2.
  const double tau = 0.1;
  const SourceTerm f = SourceTerm::Separable(profile(), TimeProfile::Power(1.0, 1.0));
  const ScalarField avg = f.average(0.0, tau);
  for (std::size_t i = 0; i < avg.size(); ++i) {
    EXPECT_NEAR(avg[i], tau / 2.0 * profile()[i], 1e-15);
  }
}

TEST(Source, RejectsBadIntervals) {
  const SourceTerm c = SourceTerm::Constant(profile());
  EXPECT_THROW(c.average(0.3, 0.3), std::invalid_argument);
  EXPECT_THROW(c.average(0.3, 0.1), std::invalid_argument);
  EXPECT_THROW(c.average(-0.1, 0.1), std::invalid_argument);
  EXPECT_THROW(TimeProfile::Power(1.0, -1.0), std::invalid_argument);
  EXPECT_THROW(c.truncated(-1.0), std::invalid_argument);
}

TEST(Source, SingularPowerAverageMatchesQuadrature) {
  const TimeProfile a = TimeProfile::Power(1.0, -0.75);
  const SourceTerm f = SourceTerm::Separable(profile(), a);
  for (double t0 : {0.0, 0.001, 0.05}) {
    const double t1 = t0 + 0.01;
    const ScalarField avg = f.average(t0, t1);
    for (std::size_t i = 0; i < avg.size(); ++i) {
      const double ref = reference(1.0, -0.75, profile()[i], INFINITY, t0, t1);
      EXPECT_NEAR(avg[i], ref, 1e-9 * (1.0 + std::abs(ref)));
    }
  }
}

TEST(Source, TruncatedAverageMatchesQuadrature) {
  const SourceTerm f = SourceTerm::Separable(profile(), TimeProfile::Power(2.0, -0.75));
  for (double level : {0.5, 4.0, 32.0}) {
    const SourceTerm fn = f.truncated(level);
    for (double t0 : {0.0, 0.002, 0.2}) {
      const double t1 = t0 + 0.01;
      const ScalarField avg = fn.average(t0, t1);
      for (std::size_t i = 0; i < avg.size(); ++i) {
        const double ref = reference(2.0, -0.75, profile()[i], level, t0, t1);
        EXPECT_NEAR(avg[i], ref, 1e-9 * (1.0 + std::abs(ref))) << level << " " << t0;
        EXPECT_LE(std::abs(avg[i]), level + 1e-15);
      }
    }
  }
}

TEST(Source, TruncationAboveSupIsIdentity) {
  const SourceTerm f = SourceTerm::Separable(profile(), TimeProfile::Constant(1.5));
  const SourceTerm fn = f.truncated(10.0);
  EXPECT_LE(max_abs(f.average(0.1, 0.2) - fn.average(0.1, 0.2)), 1e-14);
}

TEST(Source, IntegrabilityTag) {
  const SourceTerm l1 = SourceTerm::Separable(profile(), TimeProfile::Power(1.0, -0.75));
  EXPECT_EQ(l1.integrability(1.0), Integrability::kL1L2);
  EXPECT_EQ(l1.truncated(4.0).integrability(1.0), Integrability::kL2L2);
  const SourceTerm l2 = SourceTerm::Separable(profile(), TimeProfile::Power(1.0, -0.25));
  EXPECT_EQ(l2.integrability(1.0), Integrability::kL2L2);
  EXPECT_EQ(SourceTerm::Zero(Grid::Line(3, 1.0)).integrability(1.0), Integrability::kL2L2);
}

TEST(Source, SampledFramesTrapezoid) {
  const Grid g = Grid::Line(2, 1.0);
  const SourceTerm f = SourceTerm::Sampled(
      {{0.0, ScalarField(g, {0.0, 1.0})}, {1.0, ScalarField(g, {2.0, 1.0})}});
  const ScalarField avg = f.average(0.0, 1.0);
  EXPECT_NEAR(avg[0], 1.0, 1e-15);
  EXPECT_NEAR(avg[1], 1.0, 1e-15);
  // Zero outside the sampled range.
  EXPECT_EQ(max_abs(f.average(2.0, 3.0)), 0.0);
  EXPECT_THROW(SourceTerm::Sampled({{0.0, ScalarField(g)}}), std::invalid_argument);
  EXPECT_THROW(SourceTerm::Sampled({{0.5, ScalarField(g)}, {0.5, ScalarField(g)}}),
               std::invalid_argument);
}

TEST(Source, SeriesProfileTruncation) {
  const TimeProfile a = TimeProfile::Series(TimeSeries({0.0, 1.0}, {0.0, 4.0}));
  // T_2(4 s) on [0, 1]: ramp to 2 over [0, 0.5], then 2: integral 0.5 + 1 = 1.5.
  EXPECT_NEAR(a.truncated_integral(1.0, 2.0, 0.0, 1.0), 1.5, 1e-15);
  EXPECT_NEAR(a.integral(0.0, 1.0), 2.0, 1e-15);
}
