#ifndef INFOCRIT_EXPECTATION_HPP
#define INFOCRIT_EXPECTATION_HPP

// Replicated-data studies for the conjugate normal-mean model: draw theta and
// y many times, compute the criteria, and compare their averages with the
// closed-form expectations.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "infocrit/criteria.hpp"
#include "infocrit/csv.hpp"
#include "infocrit/loo.hpp"
#include "infocrit/models/normal_mean.hpp"
#include "infocrit/normal_oracle.hpp"
#include "infocrit/parallel.hpp"
#include "infocrit/rng.hpp"

namespace infocrit {

enum class Estimator { aic, dic, waic1, waic2, loo, cloo, lppd, elppd };

inline constexpr Estimator kAllEstimators[] = {Estimator::aic,  Estimator::dic,  Estimator::waic1,
                                               Estimator::waic2, Estimator::loo, Estimator::cloo,
                                               Estimator::lppd, Estimator::elppd};

inline std::string_view estimator_name(Estimator e) {
  switch (e) {
    case Estimator::aic: return "aic";
    case Estimator::dic: return "dic";
    case Estimator::waic1: return "waic1";
    case Estimator::waic2: return "waic2";
    case Estimator::loo: return "loo";
    case Estimator::cloo: return "cloo";
    case Estimator::lppd: return "lppd";
    case Estimator::elppd: return "elppd";
  }
  return "?";
}

inline std::optional<Estimator> parse_estimator(std::string_view s) {
  for (auto e : kAllEstimators) {
    if (estimator_name(e) == s) return e;
  }
  return std::nullopt;
}

/// closed_form uses the observed-data formulas in normal_oracle.hpp;
/// simulation runs posterior draws through the criteria and loo modules.
enum class ComputePath { closed_form, simulation };

struct ReplicationPlan {
  std::size_t R = 100000;
  int n = 1;
  double m = 0.0;
  oracle::ThetaSource theta_source = oracle::ThetaSource::fixed;
  double theta0 = 0.0;
  double mu0 = 0.0;
  std::uint64_t seed = 12345;
  std::set<Estimator> estimators{std::begin(kAllEstimators), std::end(kAllEstimators)};
  ComputePath path = ComputePath::closed_form;
  std::size_t draws = 4000;  // posterior draws per replicate on the simulation path
  unsigned threads = 1;

  void validate() const {
    if (R < 10) throw std::invalid_argument("too few replicates for error bars");
    setting().validate();
    if (path == ComputePath::simulation) require_draws(draws);
  }

  oracle::ExpectationSetting setting() const { return {n, m, theta_source, theta0, mu0}; }
};

struct QuantityResult {
  std::string name;
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double oracle = 0.0;
  double z_score = 0.0;
};

struct ExpectationResult {
  ReplicationPlan plan;
  std::vector<QuantityResult> quantities;

  const QuantityResult* find(std::string_view name) const {
    for (const auto& q : quantities) {
      if (q.name == name) return &q;
    }
    return nullptr;
  }
  const QuantityResult& at(std::string_view name) const {
    if (const auto* q = find(name)) return *q;
    throw std::out_of_range("no quantity " + std::string(name));
  }
};

/// (mean - oracle) / se. A quantity that is constant across replicates has
/// se at rounding level; it is then either exact (z = 0) or off by a
/// deterministic amount (z = +-inf).
inline double z_score(double mean, double se, double oracle) {
  const double diff = mean - oracle;
  const double scale = std::max(1.0, std::abs(oracle));
  if (se > 1e-12 * scale) return diff / se;
  if (std::abs(diff) <= 1e-9 * scale) return 0.0;
  return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

namespace detail {

// Per-replicate values, one slot per named quantity.
struct ReplicateValues {
  double elppd = 0, lppd = 0, elpd_aic = 0, p_dic = 0, elpd_dic = 0;
  double p_waic1 = 0, p_waic2 = 0, elppd_waic1 = 0, elppd_waic2 = 0;
  double lppd_loo = 0, p_loo = 0, lppd_cloo = 0, p_cloo = 0;
};

inline ReplicateValues closed_form_values(const ReplicationPlan& plan, const std::vector<double>& y) {
  const auto in = oracle::OracleInput::from_data(y, plan.m, plan.mu0);
  const bool want_loo = plan.n >= 2 && (plan.estimators.count(Estimator::loo) || plan.estimators.count(Estimator::cloo));
  const auto t = want_loo ? oracle::observed(in, std::span<const double>(y)) : oracle::observed(in);
  ReplicateValues v;
  v.lppd = t.lppd;
  v.elpd_aic = t.elpd_aic;
  v.p_dic = t.p_dic;
  v.elpd_dic = t.elpd_dic;
  v.p_waic1 = t.p_waic1;
  v.p_waic2 = t.p_waic2;
  v.elppd_waic1 = t.elppd_waic1;
  v.elppd_waic2 = t.elppd_waic2;
  if (t.loo) {
    v.lppd_loo = t.loo->lppd_loo;
    v.p_loo = *t.p_loo;
    v.lppd_cloo = *t.lppd_cloo;
    v.p_cloo = *t.p_cloo;
  }
  return v;
}

inline ReplicateValues simulation_values(const ReplicationPlan& plan, const std::vector<double>& y,
                                         std::uint64_t seed) {
  const NormalMeanModel model{plan.m, plan.mu0};
  const auto fit = model.fit(y, std::nullopt, plan.draws, derive_seed(seed, 0));
  const auto ll = fit.pointwise_loglik(all_points(model, y));
  const auto in = oracle::OracleInput::from_data(y);
  const PointEstimateLogLik mle{oracle::lpd_mle(in), EstimateKind::mle, 1};
  const auto rep = assemble_report(ll, fit.lpd_at_posterior_mean(), mle);
  ReplicateValues v;
  v.lppd = rep.lppd;
  v.elpd_aic = rep.elpd_aic.value();
  v.p_dic = rep.p_dic.value();
  v.elpd_dic = rep.elpd_dic.value();
  v.p_waic1 = rep.p_waic1;
  v.p_waic2 = rep.p_waic2.value();
  v.elppd_waic1 = rep.elppd_waic1;
  v.elppd_waic2 = rep.elppd_waic2.value();
  if (plan.n >= 2 && (plan.estimators.count(Estimator::loo) || plan.estimators.count(Estimator::cloo))) {
    const auto loo = run_loo(model, y, rep.lppd, plan.draws, derive_seed(seed, 1));
    v.lppd_loo = loo.lppd_loo;
    v.p_loo = loo.p_loo;
    v.lppd_cloo = loo.lppd_cloo;
    v.p_cloo = loo.p_cloo;
  }
  return v;
}

inline QuantityResult summarize(std::string name, const std::vector<double>& values, double oracle) {
  QuantityResult q;
  q.name = std::move(name);
  q.mc_mean = mean(values);
  q.mc_se = std::sqrt(sample_variance(values) / static_cast<double>(values.size()));
  q.oracle = oracle;
  q.z_score = z_score(q.mc_mean, q.mc_se, q.oracle);
  return q;
}

}  // namespace detail

/// Replicate r uses seed derive_seed(plan.seed, r), so results do not depend
/// on the thread count.
inline ExpectationResult run_expectation_study(const ReplicationPlan& plan) {
  plan.validate();
  const auto R = plan.R;
  const auto n = static_cast<std::size_t>(plan.n);
  std::vector<detail::ReplicateValues> reps(R);

  parallel_for(R, plan.threads, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(plan.seed, r);
    auto eng = make_engine(seed);
    double theta = plan.theta0;
    if (plan.theta_source == oracle::ThetaSource::from_prior) {
      theta = plan.mu0 + standard_normal(eng) / std::sqrt(plan.m);
    }
    std::vector<double> y(n);
    for (auto& v : y) v = theta + standard_normal(eng);

    auto vals = plan.path == ComputePath::closed_form ? detail::closed_form_values(plan, y)
                                                      : detail::simulation_values(plan, y, seed);
    const auto spec = NormalConjugateSpec::from_data(y, plan.m, plan.mu0);
    vals.elppd = plan.n * oracle::elppd_given_posterior(theta, spec.posterior_mean(), spec.posterior_variance());
    reps[r] = vals;
  });

  const auto expect = oracle::expected_values(plan.setting());
  ExpectationResult out;
  out.plan = plan;
  std::vector<double> buf(R);
  auto add = [&](const char* name, auto&& value, double oracle_value) {
    for (std::size_t r = 0; r < R; ++r) buf[r] = value(reps[r]);
    out.quantities.push_back(detail::summarize(name, buf, oracle_value));
  };
  using V = detail::ReplicateValues;
  const auto& est = plan.estimators;
  const double E_elppd = expect.elppd;

  if (est.count(Estimator::elppd)) add("elppd", [](const V& v) { return v.elppd; }, E_elppd);
  if (est.count(Estimator::lppd)) {
    add("lppd", [](const V& v) { return v.lppd; }, expect.lppd);
    add("lppd_bias", [](const V& v) { return v.lppd - v.elppd; }, expect.lppd - E_elppd);
  }
  if (est.count(Estimator::aic)) {
    add("elpd_aic", [](const V& v) { return v.elpd_aic; }, expect.elpd_aic);
    add("aic_gap", [](const V& v) { return v.elppd - v.elpd_aic; }, E_elppd - expect.elpd_aic);
  }
  if (est.count(Estimator::dic)) {
    add("p_dic", [](const V& v) { return v.p_dic; }, expect.p_dic);
    add("elpd_dic", [](const V& v) { return v.elpd_dic; }, expect.elpd_dic);
    add("dic_gap", [](const V& v) { return v.elppd - v.elpd_dic; }, E_elppd - expect.elpd_dic);
  }
  if (est.count(Estimator::waic1)) {
    add("p_waic1", [](const V& v) { return v.p_waic1; }, expect.p_waic1);
    add("elppd_waic1", [](const V& v) { return v.elppd_waic1; }, expect.elppd_waic1);
    add("waic1_gap", [](const V& v) { return v.elppd - v.elppd_waic1; }, E_elppd - expect.elppd_waic1);
  }
  if (est.count(Estimator::waic2)) {
    add("p_waic2", [](const V& v) { return v.p_waic2; }, expect.p_waic2);
    add("elppd_waic2", [](const V& v) { return v.elppd_waic2; }, expect.elppd_waic2);
    add("waic2_gap", [](const V& v) { return v.elppd - v.elppd_waic2; }, E_elppd - expect.elppd_waic2);
  }
  if (plan.n >= 2 && est.count(Estimator::loo)) {
    add("lppd_loo", [](const V& v) { return v.lppd_loo; }, *expect.lppd_loo);
    add("p_loo", [](const V& v) { return v.p_loo; }, *expect.p_loo);
    add("loo_gap", [](const V& v) { return v.elppd - v.lppd_loo; }, E_elppd - *expect.lppd_loo);
  }
  if (plan.n >= 2 && est.count(Estimator::cloo)) {
    add("lppd_cloo", [](const V& v) { return v.lppd_cloo; }, *expect.lppd_cloo);
    add("p_cloo", [](const V& v) { return v.p_cloo; }, *expect.p_cloo);
    add("cloo_gap", [](const V& v) { return v.elppd - v.lppd_cloo; }, E_elppd - *expect.lppd_cloo);
  }
  return out;
}

/// Name of the quantity a bias curve tracks for each estimator.
inline std::string_view gap_quantity(Estimator e) {
  switch (e) {
    case Estimator::aic: return "aic_gap";
    case Estimator::dic: return "dic_gap";
    case Estimator::waic1: return "waic1_gap";
    case Estimator::waic2: return "waic2_gap";
    case Estimator::loo: return "loo_gap";
    case Estimator::cloo: return "cloo_gap";
    case Estimator::lppd: return "lppd_bias";
    case Estimator::elppd: return "elppd";
  }
  return "?";
}

struct CurvePoint {
  int n = 0;
  Estimator estimator = Estimator::aic;
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double oracle = 0.0;
};

/// One study per n, seeded with derive_seed(base.seed, n). base.n and
/// base.estimators are overridden; n values where the estimator is
/// undefined (LOO at n = 1) are skipped.
inline std::vector<CurvePoint> bias_curve(const std::vector<int>& n_values, Estimator estimator,
                                          ReplicationPlan base) {
  std::vector<CurvePoint> out;
  base.estimators = {estimator};
  const auto seed = base.seed;
  for (int n : n_values) {
    if (n < 2 && (estimator == Estimator::loo || estimator == Estimator::cloo)) continue;
    base.n = n;
    base.seed = derive_seed(seed, static_cast<std::uint64_t>(n));
    const auto res = run_expectation_study(base);
    const auto& q = res.at(gap_quantity(estimator));
    out.push_back({n, estimator, q.mc_mean, q.mc_se, q.oracle});
  }
  return out;
}

inline void write_curve_csv(std::ostream& out, const std::vector<CurvePoint>& rows) {
  out << "n,estimator,mc_mean,mc_se,oracle\n";
  for (const auto& r : rows) {
    out << r.n << ',' << estimator_name(r.estimator) << ',' << csv::format_double(r.mc_mean) << ','
        << csv::format_double(r.mc_se) << ',' << csv::format_double(r.oracle) << '\n';
  }
}

}  // namespace infocrit

#endif  // INFOCRIT_EXPECTATION_HPP
