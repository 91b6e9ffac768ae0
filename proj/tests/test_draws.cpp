#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "infocrit/draws.hpp"
#include "infocrit/errors.hpp"

using namespace infocrit;

namespace {

std::vector<double> col(std::initializer_list<double> v) { return v; }

}  // namespace

TEST(LogMeanExp, ConstantColumnIsFixedPoint) {
  EXPECT_EQ(log_mean_exp(col({-1, -1, -1})), -1.0);
  EXPECT_EQ(log_mean_exp(col({1000, 1000})), 1000.0);
  EXPECT_EQ(log_mean_exp(col({-1e6, -1e6, -1e6})), -1e6);
}

TEST(LogMeanExp, MatchesDirectArithmetic) {
  // mean(0.5, 0.25) = 0.375
  EXPECT_NEAR(log_mean_exp(col({std::log(0.5), std::log(0.25)})), std::log(0.375), 1e-15);
  EXPECT_NEAR(log_mean_exp(col({std::log(0.5), std::log(0.25)})), -0.980829, 1e-6);
}

TEST(LogMeanExp, NoOverflowAtLargeMagnitude) {
  // log((e^0 + e^{-1}) / 2) shifted by 1e6
  const double expect = 1e6 + std::log((1.0 + std::exp(-1.0)) / 2.0);
  EXPECT_NEAR(log_mean_exp(col({1e6, 1e6 - 1})), expect, 1e-9);
  EXPECT_NEAR(log_mean_exp(col({-1e6, -1e6 - 1})), -2e6 + expect, 1e-9);
}

TEST(LogMeanExp, Errors) {
  std::vector<double> empty;
  try {
    log_mean_exp(empty);
    FAIL() << "expected throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "empty draw column");
  }
  try {
    log_mean_exp(col({0.0, std::numeric_limits<double>::quiet_NaN()}));
    FAIL() << "expected throw";
  } catch (const NumericError& e) {
    EXPECT_STREQ(e.what(), "non-finite log density");
  }
  EXPECT_THROW(log_mean_exp(col({0.0, -std::numeric_limits<double>::infinity()})), NumericError);
}

TEST(SampleVariance, FrozenValues) {
  EXPECT_EQ(sample_variance(col({0, 0, 0})), 0.0);
  EXPECT_EQ(sample_variance(col({1, 3})), 2.0);
  EXPECT_EQ(sample_variance(col({2, 4, 6})), 4.0);
}

TEST(SampleVariance, NeedsTwoDraws) {
  try {
    sample_variance(col({1.0}));
    FAIL() << "expected throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "variance requires at least 2 draws");
  }
}

TEST(McStandardError, FrozenValues) {
  EXPECT_EQ(mc_standard_error(col({5, 5, 5, 5})), 0.0);
  EXPECT_DOUBLE_EQ(mc_standard_error(col({1, 3})), 1.0);
  EXPECT_NEAR(mc_standard_error(col({0, 2, 4, 6})), std::sqrt(20.0 / 3.0 / 4.0), 1e-15);
  EXPECT_NEAR(mc_standard_error(col({0, 2, 4, 6})), 1.29099, 1e-5);
}

TEST(Lppd, FrozenValues) {
  EXPECT_EQ(lppd(LogLikMatrix::from_rows({{-2.3}})), -2.3);
  const auto m = LogLikMatrix::from_rows({{std::log(0.5), std::log(0.2)}, {std::log(0.25), std::log(0.4)}});
  EXPECT_NEAR(lppd(m), std::log(0.375) + std::log(0.3), 1e-15);
  EXPECT_NEAR(lppd(m), -2.18480, 1e-5);
}

TEST(MeanTotalLoglik, FrozenValues) {
  EXPECT_EQ(mean_total_loglik(LogLikMatrix::from_rows({{-2.3}})), -2.3);
  EXPECT_EQ(mean_total_loglik(LogLikMatrix::from_rows({{-1, -2}, {-3, -4}})), -5.0);
}

TEST(LogLikMatrix, RejectsNonFiniteWithIndex) {
  LogLikMatrix m(2, 3);
  EXPECT_THROW(m.set(1, 2, std::numeric_limits<double>::infinity()), NumericError);
  EXPECT_THROW(LogLikMatrix::from_rows({{0, 1}, {0}}), std::invalid_argument);
  EXPECT_THROW(LogLikMatrix(0, 3), std::invalid_argument);
}

TEST(LogLikMatrix, PointMajorColumnsAndRowTotals) {
  const auto m = LogLikMatrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  EXPECT_EQ(m.draws(), 2u);
  EXPECT_EQ(m.points(), 3u);
  const auto c = m.column(1);
  EXPECT_EQ(c[0], 2.0);
  EXPECT_EQ(c[1], 5.0);
  EXPECT_EQ(m.row_totals(), (std::vector<double>{6, 15}));
  const std::vector<std::size_t> pick{2, 0};
  const auto sub = m.select_points(pick);
  EXPECT_EQ(sub(1, 0), 6.0);
  EXPECT_EQ(sub(0, 1), 1.0);
}

TEST(ColumnSummary, JensenHoldsAndConstantIsExact) {
  const auto c = column_summary(col({-3.5, -3.5, -3.5}));
  EXPECT_EQ(c.log_mean, c.mean_log);
  EXPECT_EQ(c.var_log, 0.0);
  EXPECT_EQ(jensen_gap(c), 0.0);
  const auto d = column_summary(col({-1, -2, -7}));
  EXPECT_GT(d.log_mean, d.mean_log);
  EXPECT_NEAR(d.mean_log, -10.0 / 3.0, 1e-15);
  EXPECT_NEAR(d.var_log, sample_variance(col({-1, -2, -7})), 1e-15);
}

TEST(LogMeanExpSe, DeltaMethodMatchesHandComputation) {
  // w = exp(a - max) = (1, e^-1); se(mean w) / mean w.
  const double w1 = 1.0, w2 = std::exp(-1.0);
  const double mw = (w1 + w2) / 2.0;
  const double var = ((w1 - mw) * (w1 - mw) + (w2 - mw) * (w2 - mw));
  EXPECT_NEAR(log_mean_exp_se(col({0.0, -1.0})), std::sqrt(var / 2.0) / mw, 1e-15);
}
