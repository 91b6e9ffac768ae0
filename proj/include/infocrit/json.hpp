#ifndef INFOCRIT_JSON_HPP
#define INFOCRIT_JSON_HPP

// nlohmann::json conversions for the report types. Missing optionals are
// written as null and read back as empty. Doubles round-trip exactly.

#include <optional>

#include <json.hpp>

#include "infocrit/criteria.hpp"
#include "infocrit/expectation.hpp"
#include "infocrit/loo.hpp"
#include "infocrit/normal_oracle.hpp"
#include "infocrit/reproductions.hpp"

namespace infocrit {

using Json = nlohmann::ordered_json;

namespace detail {

template <class T>
void put(Json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? Json(*v) : Json(nullptr);
}

template <class T>
void get(const Json& j, const char* key, std::optional<T>& v) {
  if (!j.contains(key) || j.at(key).is_null()) {
    v.reset();
  } else {
    v = j.at(key).get<T>();
  }
}

}  // namespace detail

inline void to_json(Json& j, const Histogram& h) {
  j = Json{{"width", h.width}, {"bin_left", h.bin_left}, {"count", h.count}};
}

inline void from_json(const Json& j, Histogram& h) {
  j.at("width").get_to(h.width);
  j.at("bin_left").get_to(h.bin_left);
  j.at("count").get_to(h.count);
}

inline void to_json(Json& j, const LpdPosteriorSummary& s) {
  j = Json{{"mean", s.mean}, {"max", s.max}, {"gap", s.gap}, {"histogram", s.histogram}};
}

inline void from_json(const Json& j, LpdPosteriorSummary& s) {
  j.at("mean").get_to(s.mean);
  j.at("max").get_to(s.max);
  j.at("gap").get_to(s.gap);
  j.at("histogram").get_to(s.histogram);
}

#define INFOCRIT_JSON_OPT_FIELDS(X) \
  X(lppd) X(mean_total_loglik) X(p_dic) X(p_dic_alt) X(p_waic1) X(p_waic2) X(elppd_waic1) X(elppd_waic2) X(dic) X(waic)

inline void to_json(Json& j, const CriterionMcSe& se) {
  j = Json::object();
#define X(f) detail::put(j, #f, se.f);
  INFOCRIT_JSON_OPT_FIELDS(X)
#undef X
}

inline void from_json(const Json& j, CriterionMcSe& se) {
#define X(f) detail::get(j, #f, se.f);
  INFOCRIT_JSON_OPT_FIELDS(X)
#undef X
}

#undef INFOCRIT_JSON_OPT_FIELDS

inline void to_json(Json& j, const CriterionReport& r) {
  j = Json::object();
  j["draws"] = r.draws;
  j["points"] = r.points;
  j["waic_variant"] = static_cast<int>(r.waic_variant);
  j["lppd"] = r.lppd;
  j["mean_total_loglik"] = r.mean_total_loglik;
  detail::put(j, "lpd_at_mean", r.lpd_at_mean);
  detail::put(j, "lpd_at_mle", r.lpd_at_mle);
  detail::put(j, "k", r.k);
  detail::put(j, "p_dic", r.p_dic);
  detail::put(j, "p_dic_alt", r.p_dic_alt);
  j["p_waic1"] = r.p_waic1;
  detail::put(j, "p_waic2", r.p_waic2);
  detail::put(j, "elpd_aic", r.elpd_aic);
  detail::put(j, "elpd_dic", r.elpd_dic);
  j["elppd_waic1"] = r.elppd_waic1;
  detail::put(j, "elppd_waic2", r.elppd_waic2);
  detail::put(j, "aic", r.aic);
  detail::put(j, "dic", r.dic);
  detail::put(j, "waic", r.waic);
  j["mc_se"] = r.mc_se;
  j["warnings"] = r.warnings;
}

inline void from_json(const Json& j, CriterionReport& r) {
  j.at("draws").get_to(r.draws);
  j.at("points").get_to(r.points);
  r.waic_variant = j.at("waic_variant").get<int>() == 1 ? WaicVariant::p_waic1 : WaicVariant::p_waic2;
  j.at("lppd").get_to(r.lppd);
  j.at("mean_total_loglik").get_to(r.mean_total_loglik);
  detail::get(j, "lpd_at_mean", r.lpd_at_mean);
  detail::get(j, "lpd_at_mle", r.lpd_at_mle);
  detail::get(j, "k", r.k);
  detail::get(j, "p_dic", r.p_dic);
  detail::get(j, "p_dic_alt", r.p_dic_alt);
  j.at("p_waic1").get_to(r.p_waic1);
  detail::get(j, "p_waic2", r.p_waic2);
  detail::get(j, "elpd_aic", r.elpd_aic);
  detail::get(j, "elpd_dic", r.elpd_dic);
  j.at("elppd_waic1").get_to(r.elppd_waic1);
  detail::get(j, "elppd_waic2", r.elppd_waic2);
  detail::get(j, "aic", r.aic);
  detail::get(j, "dic", r.dic);
  detail::get(j, "waic", r.waic);
  j.at("mc_se").get_to(r.mc_se);
  j.at("warnings").get_to(r.warnings);
}

inline void to_json(Json& j, const LooReport& r) {
  j = Json{{"draws", r.draws},
           {"seed", r.seed},
           {"lppd", r.lppd},
           {"lppd_loo", r.lppd_loo},
           {"lppd_loo_se", r.lppd_loo_se},
           {"lppd_bar_minus_i", r.lppd_bar_minus_i},
           {"b", r.b},
           {"lppd_cloo", r.lppd_cloo},
           {"p_loo", r.p_loo},
           {"p_cloo", r.p_cloo},
           {"per_point", r.per_point},
           {"per_point_se", r.per_point_se}};
}

inline void from_json(const Json& j, LooReport& r) {
  j.at("draws").get_to(r.draws);
  j.at("seed").get_to(r.seed);
  j.at("lppd").get_to(r.lppd);
  j.at("lppd_loo").get_to(r.lppd_loo);
  j.at("lppd_loo_se").get_to(r.lppd_loo_se);
  j.at("lppd_bar_minus_i").get_to(r.lppd_bar_minus_i);
  j.at("b").get_to(r.b);
  j.at("lppd_cloo").get_to(r.lppd_cloo);
  j.at("p_loo").get_to(r.p_loo);
  j.at("p_cloo").get_to(r.p_cloo);
  j.at("per_point").get_to(r.per_point);
  j.at("per_point_se").get_to(r.per_point_se);
}

namespace oracle {

inline void to_json(Json& j, const OracleInput& in) {
  j = Json{{"n", in.n}, {"m", in.m}, {"ybar", in.ybar}, {"s2y", in.s2y}, {"mu0", in.mu0}};
}

inline void to_json(Json& j, const ObservedTable& t) {
  j = Json{{"input", t.input},
           {"lpd_mle", t.lpd_mle},
           {"elpd_aic", t.elpd_aic},
           {"aic", t.aic},
           {"lpd_bayes", t.lpd_bayes},
           {"p_dic", t.p_dic},
           {"elpd_dic", t.elpd_dic},
           {"dic", t.dic},
           {"lppd", t.lppd},
           {"p_waic1", t.p_waic1},
           {"p_waic2", t.p_waic2},
           {"elppd_waic1", t.elppd_waic1},
           {"elppd_waic2", t.elppd_waic2},
           {"waic1", t.waic1},
           {"waic2", t.waic2}};
  if (t.loo) {
    j["lppd_loo"] = t.loo->lppd_loo;
    j["lppd_bar_minus_i"] = t.loo->lppd_bar_minus_i;
  }
  detail::put(j, "p_loo", t.p_loo);
  detail::put(j, "p_cloo", t.p_cloo);
  detail::put(j, "lppd_cloo", t.lppd_cloo);
}

inline void to_json(Json& j, const Expectations& e) {
  j = Json{{"elppd", e.elppd},
           {"lppd", e.lppd},
           {"lpd_mle", e.lpd_mle},
           {"elpd_aic", e.elpd_aic},
           {"lpd_bayes", e.lpd_bayes},
           {"p_dic", e.p_dic},
           {"elpd_dic", e.elpd_dic},
           {"p_waic1", e.p_waic1},
           {"p_waic2", e.p_waic2},
           {"elppd_waic1", e.elppd_waic1},
           {"elppd_waic2", e.elppd_waic2}};
  detail::put(j, "lppd_loo", e.lppd_loo);
  detail::put(j, "lppd_bar_minus_i", e.lppd_bar_minus_i);
  detail::put(j, "p_loo", e.p_loo);
  detail::put(j, "p_cloo", e.p_cloo);
  detail::put(j, "lppd_cloo", e.lppd_cloo);
}

}  // namespace oracle

inline void to_json(Json& j, const QuantityResult& q) {
  j = Json{{"name", q.name}, {"mc_mean", q.mc_mean}, {"mc_se", q.mc_se}, {"oracle", q.oracle}};
  // JSON has no infinities.
  if (std::isfinite(q.z_score)) {
    j["z_score"] = q.z_score;
  } else {
    j["z_score"] = q.z_score > 0 ? "inf" : "-inf";
  }
}

inline void to_json(Json& j, const ExpectationResult& r) {
  const auto& p = r.plan;
  Json est = Json::array();
  for (auto e : p.estimators) est.push_back(estimator_name(e));
  j = Json{{"plan",
            {{"R", p.R},
             {"n", p.n},
             {"m", p.m},
             {"theta_source", p.theta_source == oracle::ThetaSource::fixed ? "fixed" : "from_prior"},
             {"theta0", p.theta0},
             {"mu0", p.mu0},
             {"seed", p.seed},
             {"path", p.path == ComputePath::closed_form ? "closed_form" : "simulation"},
             {"draws", p.draws},
             {"estimators", est}}},
           {"quantities", r.quantities}};
}

inline void to_json(Json& j, const RegressionEstimates& e) { j = Json{{"a", e.a}, {"b", e.b}, {"sigma", e.sigma}}; }

inline void to_json(Json& j, const RegressionPosteriorMeans& m) {
  j = Json{{"a", m.a}, {"b", m.b}, {"sigma", m.sigma}, {"sigma2", m.sigma2}, {"log_sigma", m.log_sigma}};
}

inline void to_json(Json& j, const ElectionReport& e) {
  j = Json{{"draws", e.draws},
           {"seed", e.seed},
           {"mle", e.mle},
           {"posterior_means", e.posterior_means},
           {"lpd_at_mle", e.lpd_at_mle},
           {"lpd_at_posterior_mean", {{"sigma", e.lpd_at_mean_sigma},
                                      {"sigma2", e.lpd_at_mean_sigma2},
                                      {"log_sigma", e.lpd_at_mean_log_sigma}}},
           {"criteria", e.criteria},
           {"lpd_posterior", e.lpd_posterior},
           {"loo", e.loo}};
}

inline void to_json(Json& j, const SchoolsColumn& c) {
  j = Json::object();
  j["model"] = pooling_name(c.pooling);
  j["seed"] = c.seed;
  detail::put(j, "lpd_mle", c.lpd_mle);
  detail::put(j, "k", c.k);
  if (c.aic) {
    j["aic"] = *c.aic;
  } else {
    j["aic"] = c.aic_undefined;
  }
  j["lpd_bayes"] = c.lpd_bayes;
  j["p_dic"] = c.p_dic;
  j["dic"] = c.dic;
  j["lppd"] = c.lppd;
  j["p_waic1"] = c.p_waic1;
  j["p_waic2"] = c.p_waic2;
  j["waic"] = c.waic;
  if (c.loo) {
    j["loo"] = *c.loo;
  } else {
    j["loo"] = c.loo_undefined;
  }
  j["report"] = c.report;
}

inline void to_json(Json& j, const SchoolsTable& t) {
  j = Json{{"draws", t.draws}, {"seed", t.seed}, {"columns", t.columns}};
}

}  // namespace infocrit

#endif  // INFOCRIT_JSON_HPP
