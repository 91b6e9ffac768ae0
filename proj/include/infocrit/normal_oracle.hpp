#ifndef INFOCRIT_NORMAL_ORACLE_HPP
#define INFOCRIT_NORMAL_ORACLE_HPP

// Closed forms for y_i ~ N(theta, 1), theta ~ N(mu0, 1/m). Everything here is
// exact arithmetic; the simulation code is tested against it.
//
// Notation: A = m + n (posterior precision), d_i = y_i - posterior mean,
// sum_i d_i^2 = (n - 1) s2y + n (m / A)^2 (ybar - mu0)^2.

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "infocrit/models/common.hpp"

namespace infocrit::oracle {

struct OracleInput {
  int n = 1;
  double s2y = 0.0;
  double ybar = 0.0;
  double mu0 = 0.0;
  double m = 0.0;

  static OracleInput from_data(std::span<const double> y, double m = 0.0, double mu0 = 0.0) {
    OracleInput in;
    in.n = static_cast<int>(y.size());
    in.m = m;
    in.mu0 = mu0;
    double sum = 0.0;
    for (double v : y) sum += v;
    in.ybar = y.empty() ? 0.0 : sum / static_cast<double>(y.size());
    if (y.size() >= 2) {
      double ss = 0.0;
      for (double v : y) ss += (v - in.ybar) * (v - in.ybar);
      in.s2y = ss / static_cast<double>(y.size() - 1);
    }
    return in;
  }

  void validate() const {
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (!(s2y >= 0.0)) throw std::invalid_argument("s2y must be >= 0");
    if (!(m >= 0.0) || !std::isfinite(m)) throw std::invalid_argument("prior precision m must be >= 0");
    if (!std::isfinite(ybar) || !std::isfinite(mu0)) throw std::invalid_argument("non-finite location");
  }

  double nd() const { return static_cast<double>(n); }
  double A() const { return m + nd(); }
  double posterior_mean() const { return (m * mu0 + nd() * ybar) / A(); }
  double sum_sq_resid() const {
    const double shrink = m / A() * (ybar - mu0);
    return (nd() - 1.0) * s2y + nd() * shrink * shrink;
  }
};

// --- observed-data criteria -------------------------------------------------

/// log p(y | ybar); the MLE ignores the prior.
inline double lpd_mle(const OracleInput& in) {
  in.validate();
  return -0.5 * in.nd() * kLog2Pi - 0.5 * (in.nd() - 1.0) * in.s2y;
}

inline double elpd_aic(const OracleInput& in) { return lpd_mle(in) - 1.0; }

/// log p(y | posterior mean).
inline double lpd_bayes(const OracleInput& in) {
  in.validate();
  return -0.5 * in.nd() * kLog2Pi - 0.5 * in.sum_sq_resid();
}

inline double p_dic(const OracleInput& in) {
  in.validate();
  return in.nd() / in.A();
}

inline double elpd_dic(const OracleInput& in) { return lpd_bayes(in) - p_dic(in); }

inline double lppd(const OracleInput& in) {
  in.validate();
  const double A = in.A();
  return -0.5 * in.nd() * kLog2Pi - 0.5 * in.nd() * std::log1p(1.0 / A) - 0.5 * A / (A + 1.0) * in.sum_sq_resid();
}

inline double p_waic1(const OracleInput& in) {
  in.validate();
  const double A = in.A();
  return in.sum_sq_resid() / (A + 1.0) + in.nd() / A - in.nd() * std::log1p(1.0 / A);
}

inline double p_waic2(const OracleInput& in) {
  in.validate();
  const double A = in.A();
  return in.sum_sq_resid() / A + in.nd() / (2.0 * A * A);
}

inline double elppd_waic1(const OracleInput& in) { return lppd(in) - p_waic1(in); }
inline double elppd_waic2(const OracleInput& in) { return lppd(in) - p_waic2(in); }

struct LooOracle {
  double lppd_loo = 0.0;
  double lppd_bar_minus_i = 0.0;
};

/// Exact leave-one-out: fold i has posterior N(c_i, 1/M), M = m + n - 1, and
/// predictive N(., c_i, 1 + 1/M). lppd_bar_minus_i averages over folds the
/// full-data lppd under each fold's posterior.
inline LooOracle loo(const OracleInput& in, std::span<const double> y) {
  in.validate();
  if (in.n < 2) throw std::invalid_argument("leave-one-out needs at least 2 data points");
  if (y.size() != static_cast<std::size_t>(in.n)) throw std::invalid_argument("y must have n entries");
  const double M = in.A() - 1.0;
  const double v = 1.0 + 1.0 / M;
  double sum = 0.0;
  for (double yi : y) sum += yi;
  LooOracle out;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double centre = (in.m * in.mu0 + sum - y[i]) / M;
    out.lppd_loo += normal_logpdf(y[i], centre, v);
    double fold = 0.0;
    for (double yj : y) fold += normal_logpdf(yj, centre, v);
    out.lppd_bar_minus_i += fold;
  }
  out.lppd_bar_minus_i /= in.nd();
  return out;
}

struct ObservedTable {
  OracleInput input;
  double lpd_mle, elpd_aic, aic;
  double lpd_bayes, p_dic, elpd_dic, dic;
  double lppd, p_waic1, p_waic2, elppd_waic1, elppd_waic2, waic1, waic2;
  std::optional<LooOracle> loo;
  std::optional<double> p_loo, p_cloo, lppd_cloo;
};

/// All observed-data closed forms. LOO fields need the data themselves.
inline ObservedTable observed(const OracleInput& in, std::optional<std::span<const double>> y = std::nullopt) {
  ObservedTable t{};
  t.input = in;
  t.lpd_mle = lpd_mle(in);
  t.elpd_aic = t.lpd_mle - 1.0;
  t.aic = -2.0 * t.elpd_aic;
  t.lpd_bayes = lpd_bayes(in);
  t.p_dic = p_dic(in);
  t.elpd_dic = t.lpd_bayes - t.p_dic;
  t.dic = -2.0 * t.elpd_dic;
  t.lppd = lppd(in);
  t.p_waic1 = p_waic1(in);
  t.p_waic2 = p_waic2(in);
  t.elppd_waic1 = t.lppd - t.p_waic1;
  t.elppd_waic2 = t.lppd - t.p_waic2;
  t.waic1 = -2.0 * t.elppd_waic1;
  t.waic2 = -2.0 * t.elppd_waic2;
  if (y && in.n >= 2) {
    t.loo = loo(in, *y);
    t.p_loo = t.lppd - t.loo->lppd_loo;
    t.p_cloo = t.loo->lppd_bar_minus_i - t.loo->lppd_loo;
    t.lppd_cloo = t.loo->lppd_loo + (t.lppd - t.loo->lppd_bar_minus_i);
  }
  return t;
}

// --- flat-prior closed forms, written out independently -------------------

namespace flat {

inline double lppd(int n, double s2y) {
  const double N = n;
  return -0.5 * N * kLog2Pi - 0.5 * N * std::log1p(1.0 / N) - 0.5 * N * (N - 1.0) / (N + 1.0) * s2y;
}
inline double p_waic1(int n, double s2y) {
  const double N = n;
  return (N - 1.0) / (N + 1.0) * s2y + 1.0 - N * std::log1p(1.0 / N);
}
inline double p_waic2(int n, double s2y) {
  const double N = n;
  return (N - 1.0) / N * s2y + 1.0 / (2.0 * N);
}
inline double lpd_post(int n, double s2y) { return -0.5 * n * kLog2Pi - 0.5 * ((n - 1.0) * s2y + 1.0); }

}  // namespace flat

// --- flat-prior expectations over y (and y~) -------------------------------

inline void require_n(int n, int lo = 1) {
  if (n < lo) {
    throw std::invalid_argument(lo == 1 ? "n must be positive" : "leave-one-out needs at least 2 data points");
  }
}

inline double expected_elppd(int n) {
  require_n(n);
  const double N = n;
  return -0.5 * N * kLog2Pi - 0.5 * N * std::log1p(1.0 / N) - 0.5 * N;
}

inline double expected_lppd(int n) {
  require_n(n);
  const double N = n;
  return -0.5 * N * kLog2Pi - 0.5 * N * std::log1p(1.0 / N) - 0.5 * N * (N - 1.0) / (N + 1.0);
}

/// E(lppd) - elppd.
inline double true_p(int n) {
  require_n(n);
  return n / (n + 1.0);
}

inline double expected_elpd_aic(int n) {
  require_n(n);
  return -0.5 * n * kLog2Pi - 0.5 * n - 0.5;
}

/// E log p(y~ | ybar(y)), the plug-in target.
inline double expected_plugin_elpd(int n) {
  require_n(n);
  return -0.5 * n * kLog2Pi - 0.5 * n - 0.5;
}

/// elppd - E(elpd_AIC); about 1/(4n) for large n.
inline double expected_aic_gap(int n) {
  require_n(n);
  return -0.5 * n * std::log1p(1.0 / n) + 0.5;
}

inline double expected_p_waic1(int n) {
  require_n(n);
  const double N = n;
  return (N - 1.0) / (N + 1.0) + 1.0 - N * std::log1p(1.0 / N);
}

inline double expected_p_waic2(int n) {
  require_n(n);
  return 1.0 - 1.0 / (2.0 * n);
}

/// elppd - E(elppd_WAIC) = E(p_WAIC) - n/(n+1).
inline double expected_waic1_gap(int n) { return expected_p_waic1(n) - true_p(n); }
inline double expected_waic2_gap(int n) { return expected_p_waic2(n) - true_p(n); }

inline double expected_lppd_loo(int n) {
  require_n(n, 2);
  const double N = n;
  return -0.5 * N * kLog2Pi - 0.5 * N * std::log1p(1.0 / (N - 1.0)) - 0.5 * N;
}

/// elppd - E(lppd_loo) = -(n/2) log(1 - 1/n^2).
inline double expected_loo_gap(int n) {
  require_n(n, 2);
  const double N = n;
  return -0.5 * N * std::log1p(-1.0 / (N * N));
}

inline double expected_lppd_bar_minus_i(int n) {
  require_n(n, 2);
  const double N = n;
  return -0.5 * N * kLog2Pi - 0.5 * N * std::log1p(1.0 / (N - 1.0)) - 0.5 * N + 1.0 - 1.0 / N;
}

inline double expected_p_loo(int n) { return expected_lppd(n) - expected_lppd_loo(n); }

inline double expected_p_cloo(int n) {
  require_n(n, 2);
  return (n - 1.0) / n;
}

/// elppd - E(lppd_cloo) = -1/(n^2 + n).
inline double expected_cloo_gap(int n) {
  require_n(n, 2);
  const double N = n;
  return -1.0 / (N * N + N);
}

// --- general-m expectations -------------------------------------------------

enum class ThetaSource { fixed, from_prior };

struct ExpectationSetting {
  int n = 1;
  double m = 0.0;
  ThetaSource source = ThetaSource::fixed;
  double theta0 = 0.0;  // used when source == fixed
  double mu0 = 0.0;

  void validate() const {
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (!(m >= 0.0) || !std::isfinite(m)) throw std::invalid_argument("prior precision m must be >= 0");
    if (source == ThetaSource::from_prior && !(m > 0.0)) {
      throw std::invalid_argument("drawing theta from the prior requires m > 0");
    }
  }
};

struct Expectations {
  double elppd, lppd, lpd_mle, elpd_aic, lpd_bayes, p_dic, elpd_dic;
  double p_waic1, p_waic2, elppd_waic1, elppd_waic2;
  std::optional<double> lppd_loo, lppd_bar_minus_i, p_loo, p_cloo, lppd_cloo;
};

/// Per-point analytic E_f log N(y~ | post_mean, 1 + post_var), f = N(theta0, 1).
inline double elppd_given_posterior(double theta0, double post_mean, double post_var) {
  if (!(post_var >= 0.0)) throw std::invalid_argument("posterior variance must be >= 0");
  const double v = 1.0 + post_var;
  const double d = theta0 - post_mean;
  return -0.5 * (kLog2Pi + std::log(v)) - (d * d + 1.0) / (2.0 * v);
}

inline Expectations expected_values(const ExpectationSetting& s) {
  s.validate();
  const double n = s.n;
  const double m = s.m;
  const double A = m + n;
  const bool prior = s.source == ThetaSource::from_prior;
  const double delta = s.theta0 - s.mu0;
  // q = E(ybar - mu0)^2, epm = E(theta0 - posterior mean)^2.
  const double q = prior ? 1.0 / m + 1.0 / n : delta * delta + 1.0 / n;
  const double epm = prior ? 1.0 / A : (m * m * delta * delta + n) / (A * A);
  const double ssr = (n - 1.0) + n * m * m * q / (A * A);

  Expectations e{};
  e.elppd = -0.5 * n * (kLog2Pi + std::log1p(1.0 / A)) - 0.5 * n * (1.0 + epm) / (1.0 + 1.0 / A);
  e.lppd = -0.5 * n * (kLog2Pi + std::log1p(1.0 / A)) - 0.5 * A / (A + 1.0) * ssr;
  e.lpd_mle = -0.5 * n * kLog2Pi - 0.5 * (n - 1.0);
  e.elpd_aic = e.lpd_mle - 1.0;
  e.lpd_bayes = -0.5 * n * kLog2Pi - 0.5 * ssr;
  e.p_dic = n / A;
  e.elpd_dic = e.lpd_bayes - e.p_dic;
  e.p_waic1 = ssr / (A + 1.0) + n / A - n * std::log1p(1.0 / A);
  e.p_waic2 = ssr / A + n / (2.0 * A * A);
  e.elppd_waic1 = e.lppd - e.p_waic1;
  e.elppd_waic2 = e.lppd - e.p_waic2;
  if (s.n >= 2) {
    const double M = A - 1.0;
    const double v = 1.0 + 1.0 / M;
    // E(theta0 - fold posterior mean)^2
    const double eloo = prior ? 1.0 / M : (m * m * delta * delta + n - 1.0) / (M * M);
    const double loo = -0.5 * n * (kLog2Pi + std::log(v)) - n * (1.0 + eloo) / (2.0 * v);
    const double own = 1.0 + eloo;
    const double others = (n - 1.0) * (1.0 - 2.0 / M + eloo);
    const double bar = -0.5 * n * (kLog2Pi + std::log(v)) - (others + own) / (2.0 * v);
    e.lppd_loo = loo;
    e.lppd_bar_minus_i = bar;
    e.p_loo = e.lppd - loo;
    e.p_cloo = bar - loo;
    e.lppd_cloo = loo + e.lppd - bar;
  }
  return e;
}

}  // namespace infocrit::oracle

#endif  // INFOCRIT_NORMAL_ORACLE_HPP
