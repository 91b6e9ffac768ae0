#ifndef INFOCRIT_REPRODUCTIONS_HPP
#define INFOCRIT_REPRODUCTIONS_HPP

// End-to-end analyses of the two bundled datasets: the 8-schools deviance
// table and the election regression.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infocrit/criteria.hpp"
#include "infocrit/datasets.hpp"
#include "infocrit/loo.hpp"
#include "infocrit/models/regression.hpp"
#include "infocrit/models/schools.hpp"
#include "infocrit/parallel.hpp"
#include "infocrit/rng.hpp"

namespace infocrit {

inline std::string_view pooling_name(Pooling p) {
  switch (p) {
    case Pooling::none: return "no_pooling";
    case Pooling::complete: return "complete_pooling";
    case Pooling::hierarchical: return "hierarchical";
  }
  return "?";
}

/// One column of the deviance table. A missing value has a reason.
struct SchoolsColumn {
  Pooling pooling = Pooling::hierarchical;
  std::uint64_t seed = 0;

  std::optional<double> lpd_mle;  // log p(y | theta_mle)
  std::optional<int> k;
  std::optional<double> aic;
  std::string aic_undefined;

  double lpd_bayes = 0.0;  // log p(y | E(theta | y))
  double p_dic = 0.0;
  double dic = 0.0;

  double lppd = 0.0;
  double p_waic1 = 0.0;
  double p_waic2 = 0.0;
  double waic = 0.0;  // uses p_waic2

  std::optional<LooReport> loo;
  std::string loo_undefined;

  CriterionReport report;
};

struct SchoolsTable {
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  std::array<SchoolsColumn, 3> columns;
  std::optional<TauPosterior> tau;  // hierarchical full-data marginal
};

/// Column c is fitted with seed derive_seed(seed, c); its LOO folds derive
/// from that.
inline SchoolsTable schools_table(const EightSchoolsData& data, std::size_t draws, std::uint64_t seed,
                                  unsigned threads = 1, TauGrid grid = {}) {
  data.validate();
  SchoolsTable t;
  t.draws = draws;
  t.seed = seed;
  const Pooling order[] = {Pooling::none, Pooling::complete, Pooling::hierarchical};
  for (std::size_t c = 0; c < 3; ++c) {
    auto& col = t.columns[c];
    col.pooling = order[c];
    col.seed = derive_seed(seed, c);
    const SchoolsModel model{order[c], PredictionMode::existing_groups, grid};
    const auto fit = model.fit(data, std::nullopt, draws, col.seed);
    const auto ll = fit.pointwise_loglik(all_points(model, data));
    const auto mle = fit.mle_loglik();
    col.report = assemble_report(ll, fit.lpd_at_posterior_mean(), mle);
    const auto& r = col.report;
    if (mle) {
      col.lpd_mle = mle->total_loglik;
      col.k = mle->k;
      col.aic = r.aic;
    } else {
      col.aic_undefined = "undefined: AIC needs a maximum likelihood estimate, which the hierarchical model lacks";
    }
    col.lpd_bayes = r.lpd_at_mean.value();
    col.p_dic = r.p_dic.value();
    col.dic = r.dic.value();
    col.lppd = r.lppd;
    col.p_waic1 = r.p_waic1;
    col.p_waic2 = r.p_waic2.value();
    col.waic = -2.0 * r.elppd_waic2.value();
    try {
      col.loo = run_loo(model, data, r.lppd, draws, col.seed, threads);
    } catch (const ModelRefusal&) {
      col.loo_undefined = "undefined: a held-out school cannot be predicted without pooling";
    }
  }
  t.tau = tau_posterior(data, std::vector<bool>(data.J(), true), grid);
  return t;
}

struct ElectionReport {
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  RegressionEstimates mle;
  RegressionPosteriorMeans posterior_means;
  double lpd_at_mle = 0.0;
  // log p(y | theta_Bayes) for the three choices of scale parameter; the
  // criteria use sigma.
  double lpd_at_mean_sigma = 0.0;
  double lpd_at_mean_sigma2 = 0.0;
  double lpd_at_mean_log_sigma = 0.0;
  CriterionReport criteria;
  LpdPosteriorSummary lpd_posterior;
  LooReport loo;
};

inline ElectionReport election_report(const ElectionData& data, std::size_t draws, std::uint64_t seed,
                                      unsigned threads = 1) {
  const RegressionModel model;
  const auto spec = data.as_regression();
  const auto fit = model.fit(spec, std::nullopt, draws, seed);
  ElectionReport e;
  e.draws = draws;
  e.seed = seed;
  e.mle = fit.mle();
  e.posterior_means = fit.posterior_means();
  const auto mle = fit.mle_loglik();
  e.lpd_at_mle = mle.total_loglik;
  e.lpd_at_mean_sigma = fit.lpd_at_posterior_mean(ScaleParameterization::sigma);
  e.lpd_at_mean_sigma2 = fit.lpd_at_posterior_mean(ScaleParameterization::sigma2);
  e.lpd_at_mean_log_sigma = fit.lpd_at_posterior_mean(ScaleParameterization::log_sigma);
  const auto ll = fit.pointwise_loglik(all_points(model, spec));
  e.criteria = assemble_report(ll, e.lpd_at_mean_sigma, mle);
  e.lpd_posterior = lpd_posterior_summary(fit.total_loglik());
  e.loo = run_loo(model, spec, e.criteria.lppd, draws, seed, threads);
  return e;
}

}  // namespace infocrit

#endif  // INFOCRIT_REPRODUCTIONS_HPP
