#ifndef INFOCRIT_CRITERIA_HPP
#define INFOCRIT_CRITERIA_HPP

// AIC, DIC, WAIC and BIC from a pointwise log-likelihood matrix plus
// point-estimate log densities. All *_elpd quantities are on the log scale;
// aic/dic/waic are on the deviance scale (-2 x elpd).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "infocrit/draws.hpp"

namespace infocrit {

enum class EstimateKind { mle, posterior_mean };

/// log p(y | theta_hat) at a point estimate. `k` counts the estimated
/// parameters and is only meaningful for AIC/BIC.
struct PointEstimateLogLik {
  double total_loglik = 0.0;
  EstimateKind kind = EstimateKind::mle;
  std::optional<int> k;
};

struct ElpdEstimate {
  double elpd = 0.0;      // log scale
  double deviance = 0.0;  // -2 * elpd
};

enum class WaicVariant { p_waic1 = 1, p_waic2 = 2 };

namespace detail {

inline void require_mle(const PointEstimateLogLik& pe) {
  if (pe.kind != EstimateKind::mle) {
    throw std::invalid_argument("AIC requires the maximum likelihood estimate");
  }
  if (!pe.k || *pe.k < 0) throw std::invalid_argument("parameter count k must be given and >= 0");
  if (!std::isfinite(pe.total_loglik)) throw NumericError("non-finite point-estimate log density");
}

}  // namespace detail

inline ElpdEstimate aic(const PointEstimateLogLik& pe) {
  detail::require_mle(pe);
  const double elpd = pe.total_loglik - *pe.k;
  return {elpd, -2.0 * elpd};
}

/// Can be negative when the posterior mean is far from the mode.
inline double p_dic(double lpd_at_mean, const LogLikMatrix& m) {
  if (!std::isfinite(lpd_at_mean)) throw NumericError("non-finite point-estimate log density");
  return 2.0 * (lpd_at_mean - mean_total_loglik(m));
}

inline double p_dic_alt(std::span<const double> row_totals) {
  return 2.0 * sample_variance(row_totals);
}

inline double p_waic1(const LogLikMatrix& m) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.points(); ++i) total += jensen_gap(column_summary(m.column(i)));
  return 2.0 * total;
}

inline double p_waic2(const LogLikMatrix& m) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.points(); ++i) total += sample_variance(m.column(i));
  return total;
}

inline ElpdEstimate waic(const LogLikMatrix& m, WaicVariant variant = WaicVariant::p_waic2) {
  const double penalty = variant == WaicVariant::p_waic1 ? p_waic1(m) : p_waic2(m);
  const double elppd = lppd(m) - penalty;
  return {elppd, -2.0 * elppd};
}

inline double bic(const PointEstimateLogLik& pe, std::int64_t n) {
  detail::require_mle(pe);
  if (n < 1) throw std::invalid_argument("BIC requires n >= 1");
  return -2.0 * pe.total_loglik + *pe.k * std::log(static_cast<double>(n));
}

/// Equal-width histogram; bin_left[b] is the left edge of bin b and the last
/// bin is closed on the right.
struct Histogram {
  std::vector<double> bin_left;
  std::vector<std::size_t> count;
  double width = 0.0;
};

inline Histogram make_histogram(std::span<const double> values, std::size_t bins = 30) {
  if (values.empty()) throw std::invalid_argument("empty draw column");
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  Histogram h;
  h.width = (hi - lo) / static_cast<double>(bins);
  h.bin_left.resize(bins);
  h.count.assign(bins, 0);
  for (std::size_t b = 0; b < bins; ++b) h.bin_left[b] = lo + h.width * static_cast<double>(b);
  for (double v : values) {
    std::size_t b = 0;
    if (h.width > 0.0) {
      b = static_cast<std::size_t>((v - lo) / h.width);
      b = std::min(b, bins - 1);
    }
    ++h.count[b];
  }
  return h;
}

/// Summary of the posterior distribution of log p(y | theta).
struct LpdPosteriorSummary {
  double mean = 0.0;
  double max = 0.0;
  double gap = 0.0;  // max - mean
  Histogram histogram;
};

inline LpdPosteriorSummary lpd_posterior_summary(std::span<const double> row_totals,
                                                 std::size_t bins = 30) {
  LpdPosteriorSummary out;
  out.mean = mean(row_totals);
  for (double v : row_totals) {
    if (!std::isfinite(v)) throw NumericError("non-finite log density");
  }
  out.max = *std::max_element(row_totals.begin(), row_totals.end());
  out.gap = out.max - out.mean;
  out.histogram = make_histogram(row_totals, bins);
  return out;
}

/// Delta-method Monte Carlo standard errors, assuming independent draws.
struct CriterionMcSe {
  std::optional<double> lppd;
  std::optional<double> mean_total_loglik;
  std::optional<double> p_dic;
  std::optional<double> p_dic_alt;
  std::optional<double> p_waic1;
  std::optional<double> p_waic2;
  std::optional<double> elppd_waic1;
  std::optional<double> elppd_waic2;
  std::optional<double> dic;
  std::optional<double> waic;
};

struct CriterionReport {
  std::size_t draws = 0;
  std::size_t points = 0;
  WaicVariant waic_variant = WaicVariant::p_waic2;

  double lppd = 0.0;
  double mean_total_loglik = 0.0;
  std::optional<double> lpd_at_mean;
  std::optional<double> lpd_at_mle;
  std::optional<int> k;

  std::optional<double> p_dic;
  std::optional<double> p_dic_alt;
  double p_waic1 = 0.0;
  std::optional<double> p_waic2;

  std::optional<double> elpd_aic;
  std::optional<double> elpd_dic;
  double elppd_waic1 = 0.0;
  std::optional<double> elppd_waic2;

  std::optional<double> aic;
  std::optional<double> dic;
  std::optional<double> waic;

  CriterionMcSe mc_se;
  std::vector<std::string> warnings;
};

namespace detail {

inline double se_of(const std::vector<double>& influence) {
  return mc_standard_error(influence);
}

}  // namespace detail

/// Assembles every criterion available from the inputs. Variance-based
/// fields (p_WAIC2, p_DIC-alt, standard errors) stay empty when S < 2, as do
/// AIC and DIC when their point-estimate inputs are absent.
inline CriterionReport assemble_report(const LogLikMatrix& m, std::optional<double> lpd_at_mean,
                                       std::optional<PointEstimateLogLik> mle,
                                       WaicVariant variant = WaicVariant::p_waic2) {
  CriterionReport r;
  r.draws = m.draws();
  r.points = m.points();
  r.waic_variant = variant;

  const auto summaries = column_summaries(m);
  const auto totals = m.row_totals();
  for (const auto& c : summaries) r.lppd += c.log_mean;
  r.mean_total_loglik = mean(totals);

  double pw1 = 0.0;
  for (const auto& c : summaries) pw1 += jensen_gap(c);
  r.p_waic1 = 2.0 * pw1;
  r.elppd_waic1 = r.lppd - r.p_waic1;

  const bool have_variance = m.draws() >= 2;
  if (have_variance) {
    double pw2 = 0.0;
    for (const auto& c : summaries) pw2 += c.var_log;
    r.p_waic2 = pw2;
    r.elppd_waic2 = r.lppd - pw2;
    r.p_dic_alt = p_dic_alt(totals);
  } else {
    r.warnings.emplace_back("S < 2: variance-based quantities unavailable");
  }

  if (variant == WaicVariant::p_waic1) {
    r.waic = -2.0 * r.elppd_waic1;
  } else if (r.elppd_waic2) {
    r.waic = -2.0 * *r.elppd_waic2;
  }

  if (lpd_at_mean) {
    r.lpd_at_mean = *lpd_at_mean;
    r.p_dic = p_dic(*lpd_at_mean, m);
    r.elpd_dic = *lpd_at_mean - *r.p_dic;
    r.dic = -2.0 * *r.elpd_dic;
    // Equivalent to -2 * lpd_at_mean + 2 * p_dic.
    if (*r.p_dic < 0.0) r.warnings.emplace_back("negative p_dic: posterior mean is far from the mode");
  }

  if (mle) {
    const auto a = aic(*mle);
    r.lpd_at_mle = mle->total_loglik;
    r.k = mle->k;
    r.elpd_aic = a.elpd;
    r.aic = a.deviance;
  }

  if (have_variance) {
    const std::size_t S = m.draws();
    std::vector<double> psi_lppd(S, 0.0);
    std::vector<double> psi_mean_log(S, 0.0);
    std::vector<double> psi_var(S, 0.0);
    for (std::size_t i = 0; i < m.points(); ++i) {
      const auto col = m.column(i);
      const auto& c = summaries[i];
      for (std::size_t s = 0; s < S; ++s) {
        const double dev = col[s] - c.mean_log;
        psi_lppd[s] += std::exp(col[s] - c.log_mean) - 1.0;
        psi_mean_log[s] += dev;
        psi_var[s] += dev * dev;
      }
    }
    std::vector<double> psi_pw1(S), psi_e1(S), psi_e2(S), psi_alt(S);
    for (std::size_t s = 0; s < S; ++s) {
      psi_pw1[s] = 2.0 * (psi_lppd[s] - psi_mean_log[s]);
      psi_e1[s] = psi_lppd[s] - psi_pw1[s];
      psi_e2[s] = psi_lppd[s] - psi_var[s];
      const double d = totals[s] - r.mean_total_loglik;
      psi_alt[s] = 2.0 * d * d;
    }
    auto& se = r.mc_se;
    se.lppd = detail::se_of(psi_lppd);
    se.mean_total_loglik = mc_standard_error(totals);
    se.p_dic_alt = detail::se_of(psi_alt);
    se.p_waic1 = detail::se_of(psi_pw1);
    se.p_waic2 = detail::se_of(psi_var);
    se.elppd_waic1 = detail::se_of(psi_e1);
    se.elppd_waic2 = detail::se_of(psi_e2);
    se.waic = 2.0 * (variant == WaicVariant::p_waic1 ? *se.elppd_waic1 : *se.elppd_waic2);
    if (r.p_dic) {
      se.p_dic = 2.0 * *se.mean_total_loglik;
      se.dic = 2.0 * *se.p_dic;
    }
  }
  return r;
}

}  // namespace infocrit

#endif  // INFOCRIT_CRITERIA_HPP
