// Fits the normal-mean model to a small sample, computes every criterion from
// posterior draws, and prints them next to the closed-form values.

#include <cstdio>
#include <vector>

#include "infocrit/infocrit.hpp"

using namespace infocrit;

int main() {
  const std::vector<double> y{0.8, -0.4, 1.9, 0.3, 1.1, -0.7, 0.6};
  const double m = 2.0, mu0 = 0.0;
  const std::size_t draws = 50000;
  const std::uint64_t seed = 2024;

  const NormalMeanModel model{m, mu0};
  const auto fit = model.fit(y, std::nullopt, draws, seed);
  const auto ll = fit.pointwise_loglik(all_points(model, y));
  // the MLE of the mean is ybar, one parameter
  double ybar = 0.0;
  for (double v : y) ybar += v / static_cast<double>(y.size());
  double at_mle = 0.0;
  for (double v : y) at_mle += normal_logpdf(v, ybar, 1.0);
  const auto report = assemble_report(ll, fit.lpd_at_posterior_mean(), PointEstimateLogLik{at_mle, EstimateKind::mle, 1});
  const auto loo = run_loo(model, y, report.lppd, draws, seed);

  const auto exact = oracle::observed(oracle::OracleInput::from_data(y, m, mu0), y);

  std::printf("%-12s %12s %12s\n", "quantity", "draws", "closed form");
  auto row = [](const char* name, double sim, double ref) { std::printf("%-12s %12.4f %12.4f\n", name, sim, ref); };
  row("lppd", report.lppd, exact.lppd);
  row("p_dic", *report.p_dic, exact.p_dic);
  row("dic", *report.dic, exact.dic);
  row("p_waic1", report.p_waic1, exact.p_waic1);
  row("p_waic2", *report.p_waic2, exact.p_waic2);
  row("aic", *report.aic, exact.aic);
  row("lppd_loo", loo.lppd_loo, exact.loo->lppd_loo);
  row("p_loo", loo.p_loo, *exact.p_loo);
  row("lppd_cloo", loo.lppd_cloo, *exact.lppd_cloo);
  return 0;
}
