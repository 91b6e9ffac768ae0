#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "infocrit/criteria.hpp"
#include "infocrit/datasets.hpp"
#include "infocrit/models/balanced.hpp"
#include "infocrit/models/normal_mean.hpp"
#include "infocrit/models/regression.hpp"
#include "infocrit/models/schools.hpp"
#include "infocrit/normal_oracle.hpp"

using namespace infocrit;

namespace {

double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v) {
  const double mu = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return s / static_cast<double>(v.size() - 1);
}

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

double sum_columns(const LogLikMatrix& m, std::size_t s) {
  double t = 0.0;
  for (std::size_t i = 0; i < m.points(); ++i) t += m(s, i);
  return t;
}

}  // namespace

TEST(NormalMean, PosteriorMoments) {
  const std::vector<double> y{1.0, 2.0, 0.5, 1.5};
  const auto spec = NormalConjugateSpec::from_data(y, 4.0, -1.0);
  EXPECT_DOUBLE_EQ(spec.posterior_mean(), (4.0 * -1.0 + 5.0) / 8.0);
  EXPECT_DOUBLE_EQ(spec.posterior_variance(), 1.0 / 8.0);
  const auto theta = normal_posterior_draws(spec, 200000, 5);
  EXPECT_NEAR(sample_mean(theta), spec.posterior_mean(), 4.0 * std::sqrt(spec.posterior_variance() / 200000));
  EXPECT_NEAR(sample_var(theta), 1.0 / 8.0, 4.0 * (1.0 / 8.0) * std::sqrt(2.0 / 200000));
  EXPECT_THROW(NormalConjugateSpec::from_data(std::vector<double>{}, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(NormalConjugateSpec::from_data(y, -1.0).validate(), std::invalid_argument);
}

TEST(NormalMean, TotalMatchesPointwiseSum) {
  const std::vector<double> y{1.0, -2.0, 0.5};
  const auto fit = NormalMeanModel{}.fit(y, std::nullopt, 50, 8);
  const auto ll = fit.pointwise_loglik(std::vector<std::size_t>{0, 1, 2});
  const auto totals = fit.total_loglik();
  for (std::size_t s = 0; s < 50; ++s) EXPECT_NEAR(totals[s], sum_columns(ll, s), 1e-12);
}

TEST(NormalMean, FitIsReproducible) {
  const std::vector<double> y{0.2, 0.4};
  EXPECT_EQ(NormalMeanModel{}.fit(y, 1, 100, 3).theta(), NormalMeanModel{}.fit(y, 1, 100, 3).theta());
  EXPECT_NE(NormalMeanModel{}.fit(y, 1, 100, 3).theta(), NormalMeanModel{}.fit(y, 1, 100, 4).theta());
}

TEST(Regression, MleAndPosteriorMeans) {
  const auto d = ElectionData::hibbs().as_regression();
  const auto fit = regression_fit(d, 100000, 12345);
  const auto e = fit.mle();
  EXPECT_NEAR(e.a, 45.9, 0.05);
  EXPECT_NEAR(e.b, 3.2, 0.05);
  EXPECT_NEAR(e.sigma, 3.6, 0.05);
  EXPECT_NEAR(fit.mle_loglik().total_loglik, -40.3, 0.05);
  EXPECT_EQ(*fit.mle_loglik().k, 3);

  // flat-prior posterior: E(a, b) = OLS, E(sigma^2) = rss / (n - 4)
  const auto ols = ordinary_least_squares(d.x, d.y);
  const auto pm = fit.posterior_means();
  const double n = static_cast<double>(d.n());
  const double e_sigma2 = ols.rss / (n - 4.0);
  EXPECT_NEAR(pm.a, ols.a, 0.03);
  EXPECT_NEAR(pm.b, ols.b, 0.01);
  EXPECT_NEAR(pm.sigma2, e_sigma2, 0.01 * e_sigma2);
  EXPECT_LT(pm.sigma, std::sqrt(pm.sigma2));
  EXPECT_LT(std::exp(pm.log_sigma), pm.sigma);
}

TEST(Regression, TotalMatchesPointwiseSum) {
  const RegressionFlatSpec d{{0, 1, 2, 3, 4}, {1.0, 2.5, 2.9, 4.2, 5.1}};
  const auto fit = regression_fit(d, 40, 2);
  const auto ll = fit.pointwise_loglik(std::vector<std::size_t>{0, 1, 2, 3, 4});
  const auto totals = fit.total_loglik();
  for (std::size_t s = 0; s < 40; ++s) EXPECT_NEAR(totals[s], sum_columns(ll, s), 1e-9);
}

TEST(Regression, RejectsSingularAndTinyDesigns) {
  EXPECT_THROW(regression_fit({{1, 1, 1, 1, 1}, {1, 2, 3, 4, 5}}, 10, 1), std::invalid_argument);
  EXPECT_THROW(regression_fit({{1, 2, 3}, {1, 2, 3}}, 10, 1), std::invalid_argument);
  EXPECT_THROW(regression_fit({{1, 2, 3, 4}, {1, 2, 3}}, 10, 1), std::invalid_argument);
}

TEST(Regression, ExcludedFitKeepsEvaluatingAllPoints) {
  const RegressionFlatSpec d{{0, 1, 2, 3, 4, 5}, {1.0, 2.5, 2.9, 4.2, 5.1, 9.0}};
  const auto fit = RegressionModel{}.fit(d, 5, 1000, 4);
  EXPECT_EQ(fit.pointwise_loglik(std::vector<std::size_t>{5}).points(), 1u);
  // the outlier 9.0 is far from a line fit without it
  EXPECT_LT(fit.mle().sigma, regression_fit(d, 10, 4).mle().sigma);
}

TEST(Schools, TauPosteriorNormalized) {
  const auto d = EightSchoolsData::rubin1981();
  const auto p = tau_posterior(d, std::vector<bool>(8, true), TauGrid{});
  double total = 0.0;
  for (double v : p.mass) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(p.cdf.back(), 1.0);
  // mode at 0 for these data
  EXPECT_EQ(std::max_element(p.mass.begin(), p.mass.end()) - p.mass.begin(), 0);
  double integ = 0.0;
  for (double v : p.density()) integ += v * p.cell_width;
  EXPECT_NEAR(integ, 1.0, 1e-12);
}

TEST(Schools, PinnedTauZeroMatchesCompletePooling) {
  const auto d = EightSchoolsData::rubin1981();
  TauGrid pinned;
  pinned.pinned = 0.0;
  const auto h = SchoolsModel{Pooling::hierarchical, PredictionMode::existing_groups, pinned}.fit(d, std::nullopt, 20000, 1);
  const auto c = SchoolsModel{Pooling::complete}.fit(d, std::nullopt, 20000, 2);
  const double ks = ks_statistic(h.theta().column(0), c.theta().column(0));
  // 99.9% critical value for equal samples
  EXPECT_LT(ks, 1.95 * std::sqrt(2.0 / 20000));
  // pooled estimate 7.69, sd 4.07
  EXPECT_NEAR(c.theta().column_mean(3), 7.69, 0.1);
}

TEST(Schools, ShrinkageBetweenPooledAndRaw) {
  const auto d = EightSchoolsData::rubin1981();
  const auto h = SchoolsModel{}.fit(d, std::nullopt, 20000, 3);
  const double a = h.theta().column_mean(0);
  EXPECT_GT(a, 7.69);
  EXPECT_LT(a, 28.0);
  EXPECT_FALSE(h.mle_loglik().has_value());
  EXPECT_EQ(*SchoolsModel{Pooling::complete}.fit(d, std::nullopt, 10, 1).mle_loglik()->k, 1);
  EXPECT_EQ(*SchoolsModel{Pooling::none}.fit(d, std::nullopt, 10, 1).mle_loglik()->k, 8);
}

TEST(Schools, NoPoolingRefusesUnseenGroups) {
  const auto d = EightSchoolsData::rubin1981();
  const auto held = SchoolsModel{Pooling::none}.fit(d, 2, 10, 1);
  EXPECT_NO_THROW(held.pointwise_loglik(std::vector<std::size_t>{1}));
  EXPECT_THROW(held.pointwise_loglik(std::vector<std::size_t>{2}), ModelRefusal);
  const auto fresh = SchoolsModel{Pooling::none, PredictionMode::new_groups}.fit(d, std::nullopt, 10, 1);
  EXPECT_THROW(fresh.pointwise_loglik(std::vector<std::size_t>{0}), ModelRefusal);
  const auto h_new = SchoolsModel{Pooling::hierarchical, PredictionMode::new_groups}.fit(d, std::nullopt, 10, 1);
  EXPECT_NO_THROW(h_new.pointwise_loglik(std::vector<std::size_t>{0}));
}

TEST(Schools, TotalMatchesPointwiseSum) {
  const auto d = EightSchoolsData::rubin1981();
  const auto fit = SchoolsModel{}.fit(d, std::nullopt, 30, 6);
  const auto ll = fit.pointwise_loglik(std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});
  const auto totals = fit.total_loglik();
  for (std::size_t s = 0; s < 30; ++s) EXPECT_NEAR(totals[s], sum_columns(ll, s), 1e-9);
}

TEST(Balanced, CountingChangesColumnsNotTotals) {
  BalancedHierarchicalData d{{{0.1, 0.5, -0.2}, {1.4, 0.9, 1.1}}, 0.0, 2.0};
  const auto theta = balanced_posterior_draws(d, 100, 4);
  const auto obs = balanced_hierarchical_loglik(theta, d, Counting::observation);
  const auto grp = balanced_hierarchical_loglik(theta, d, Counting::group);
  EXPECT_EQ(obs.points(), 6u);
  EXPECT_EQ(grp.points(), 2u);
  EXPECT_EQ(obs.row_totals().size(), grp.row_totals().size());
  for (std::size_t s = 0; s < 100; ++s) EXPECT_NEAR(obs.row_totals()[s], grp.row_totals()[s], 1e-12);
  BalancedHierarchicalData ragged{{{0.1, 0.2}, {0.3}}, 0.0, 1.0};
  EXPECT_THROW(ragged.validate(), std::invalid_argument);
}

// Each group is a conjugate normal-mean problem with prior precision 1/tau^2.
TEST(Balanced, MatchesPerGroupConjugateOracle) {
  BalancedHierarchicalData d{{{0.1, 0.5, -0.2, 0.7}, {1.4, 0.9, 1.1, 2.0}, {-1.0, -0.3, 0.2, -0.8}}, 0.2, 0.8};
  const double m = 1.0 / (d.tau * d.tau);
  const auto theta = balanced_posterior_draws(d, 100000, 21);
  const auto obs = assemble_report(balanced_hierarchical_loglik(theta, d, Counting::observation), std::nullopt,
                                   std::nullopt);
  const auto grp = assemble_report(balanced_hierarchical_loglik(theta, d, Counting::group), std::nullopt,
                                   std::nullopt);
  double lppd = 0.0, pw2_obs = 0.0, pw2_grp = 0.0;
  for (const auto& g : d.groups) {
    const auto in = oracle::OracleInput::from_data(g, m, d.mu);
    lppd += oracle::lppd(in);
    pw2_obs += oracle::p_waic2(in);
    // Var of -n/2 (ybar - theta)^2 with theta ~ N(c, v)
    const double v = 1.0 / in.A();
    const double dev = in.ybar - in.posterior_mean();
    pw2_grp += in.nd() * in.nd() * (dev * dev * v + 0.5 * v * v);
  }
  EXPECT_LT(std::abs(obs.lppd - lppd), 3.0 * *obs.mc_se.lppd);
  EXPECT_LT(std::abs(*obs.p_waic2 - pw2_obs), 3.0 * *obs.mc_se.p_waic2);
  EXPECT_LT(std::abs(*grp.p_waic2 - pw2_grp), 3.0 * *grp.mc_se.p_waic2);
}
