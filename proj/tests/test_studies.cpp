#include <gtest/gtest.h>

#include <cmath>

#include "tvflow/studies.hpp"

using namespace tvflow;

namespace {

RunSpec mollify_spec() {
  return parse_config(
      "dimension = 1\nnx = 32\ntau = 0.002\nt_end = 0.05\ninitial = zero\n"
      "source = separable\nsource_time = power\nsource_exponent = -0.75\n"
      "gap_tol = 1e-11\nmax_iters = 5000000\n");
}

}  // namespace

TEST(Mollification, BoundedSourceAboveSupGivesZeroTable) {
  RunSpec s = mollify_spec();
  s.source.time = SourceSpec::Time::kConstant;
  s.source.coef = 1.0;
  const CauchyTable t = mollification_study(s, {4, 8, 16});
  ASSERT_EQ(t.rows.size(), 3u);
  for (const auto& r : t.rows) {
    EXPECT_EQ(r.max_difference, 0.0);
    EXPECT_EQ(r.source_bound, 0.0);
  }
  EXPECT_TRUE(t.bounded);
}

TEST(Mollification, SingleLevelGivesEmptyTable) {
  const CauchyTable t = mollification_study(mollify_spec(), {4});
  EXPECT_TRUE(t.rows.empty());
  EXPECT_TRUE(t.monotone);
  EXPECT_EQ(format_cauchy_table(t), "n,m,max_diff,source_bound,gap_slack\n");
}

TEST(Mollification, SingularSourceIsCauchy) {
  const CauchyTable t = mollification_study(mollify_spec(), {16, 4, 8});
  EXPECT_EQ(t.levels, (std::vector<double>{4, 8, 16}));
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0].level_lo, 4);
  EXPECT_EQ(t.rows[0].level_hi, 8);
  EXPECT_EQ(t.rows[2].level_lo, 8);
  for (const auto& r : t.rows) {
    EXPECT_GT(r.max_difference, 0.0);
    EXPECT_LE(r.max_difference, r.source_bound + r.gap_slack);
  }
  EXPECT_TRUE(t.monotone);
  EXPECT_TRUE(t.bounded);
  EXPECT_TRUE(t.failures.empty());
}

TEST(Mollification, RejectsBadLevels) {
  EXPECT_THROW(mollification_study(mollify_spec(), {4, 4}), std::invalid_argument);
  EXPECT_THROW(mollification_study(mollify_spec(), {0, 4}), std::invalid_argument);
}

TEST(Extinction, Predictions) {
  ShapeSpec s;
  s.kind = ShapeSpec::Kind::kIndicator;
  s.lo[0] = 0.3;
  s.hi[0] = 0.7;
  EXPECT_NEAR(*predicted_extinction(s, 1), 0.2, 1e-15);
  EXPECT_FALSE(predicted_extinction(s, 2).has_value());
  s.kind = ShapeSpec::Kind::kDisc;
  s.radius = 0.25;
  EXPECT_DOUBLE_EQ(*predicted_extinction(s, 2), 0.125);
  EXPECT_DOUBLE_EQ(*predicted_extinction(s, 1), 0.25);
  s.kind = ShapeSpec::Kind::kBump;
  EXPECT_FALSE(predicted_extinction(s, 1).has_value());
}

TEST(Extinction, CoarseIndicator) {
  const RunSpec s = parse_config(
      "dimension = 1\nnx = 64\ntau = 0.002\nt_end = 0.3\ninitial = indicator\ngap_tol = 1e-10\n");
  const ExtinctionResult r = extinction_study(s);
  ASSERT_TRUE(r.extinction_time.has_value());
  // The discrete plateau spans 26 cells of 1/64.
  const double discrete = 26.0 / 64.0 / 2.0;
  EXPECT_NEAR(*r.extinction_time, discrete, 0.01);
  EXPECT_TRUE(r.failures.empty());
  EXPECT_EQ(r.times.size(), r.sup_norms.size());
  EXPECT_DOUBLE_EQ(r.threshold, 1.0 / 64.0);
}

TEST(Extinction, RequiresZeroSource) {
  RunSpec s = parse_config("source = constant\n");
  EXPECT_THROW(extinction_study(s), std::invalid_argument);
}

TEST(Oracle, SmallBattery) {
  const OracleBattery b = oracle_battery(32, 20);
  EXPECT_EQ(b.instances, 20);
  EXPECT_TRUE(b.all_converged);
  EXPECT_LE(b.worst_error, 1e-6);
  EXPECT_LE(b.worst_gap, 1e-10);
}
