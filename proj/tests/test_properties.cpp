#include <gtest/gtest.h>

#include "property_checks.hpp"

TEST(Properties, JensenPerColumn) {
  const auto r = props::jensen_per_column();
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, PWaicNonNegative) {
  const auto r = props::p_waic_nonnegative();
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, LogMeanExpShiftInvariance) {
  const auto r = props::log_mean_exp_shift();
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, DevianceScaleIdentities) {
  const auto r = props::deviance_identities();
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, ParallelBitIdentity) {
  const auto r = props::parallel_bit_identity();
  EXPECT_TRUE(r.ok) << r.detail;
}

TEST(Properties, NoPoolingLooRefusal) {
  const auto r = props::no_pooling_refusal();
  EXPECT_TRUE(r.ok) << r.detail;
}

// the checks above must be able to fail
TEST(Properties, OutcomeKeepsFirstFailure) {
  props::Outcome o;
  o.fail("first");
  o.fail("second");
  EXPECT_FALSE(o.ok);
  EXPECT_EQ(o.detail, "first");
}
