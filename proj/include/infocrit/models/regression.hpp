#ifndef INFOCRIT_MODELS_REGRESSION_HPP
#define INFOCRIT_MODELS_REGRESSION_HPP

// Simple linear regression y_i ~ N(a + b x_i, sigma^2) with the flat prior
// p(a, b, log sigma) ∝ 1. The posterior is normal-inverse-chi^2:
//   sigma^2 | y      ~ Inv-chi^2(n - 2, s^2),  s^2 = RSS / (n - 2)
//   (a, b) | sigma, y ~ N(ols, sigma^2 (X'X)^-1)

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "infocrit/criteria.hpp"
#include "infocrit/draws.hpp"
#include "infocrit/models/common.hpp"
#include "infocrit/rng.hpp"

namespace infocrit {

struct RegressionFlatSpec {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t n() const { return y.size(); }
};

/// Which posterior mean of the scale enters log p(y | theta_hat_Bayes).
enum class ScaleParameterization { sigma, sigma2, log_sigma };

struct OlsSummary {
  double a = 0.0;
  double b = 0.0;
  double rss = 0.0;
  double xbar = 0.0;
  double sxx = 0.0;
  std::size_t n = 0;
};

inline OlsSummary ordinary_least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("x and y must have equal length");
  if (y.size() < 4) throw std::invalid_argument("regression needs at least 4 points");
  OlsSummary o;
  o.n = y.size();
  const auto n = static_cast<double>(o.n);
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < o.n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  o.xbar = sx / n;
  const double ybar = sy / n;
  double sxy = 0.0, sxx = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < o.n; ++i) {
    sxx += (x[i] - o.xbar) * (x[i] - o.xbar);
    sxy += (x[i] - o.xbar) * (y[i] - ybar);
    scale = std::max(scale, std::abs(x[i]));
  }
  if (!(sxx > 1e-12 * std::max(1.0, scale * scale) * n)) throw std::invalid_argument("singular design");
  o.sxx = sxx;
  o.b = sxy / sxx;
  o.a = ybar - o.b * o.xbar;
  for (std::size_t i = 0; i < o.n; ++i) {
    const double r = y[i] - o.a - o.b * x[i];
    o.rss += r * r;
  }
  return o;
}

struct RegressionEstimates {
  double a = 0.0;
  double b = 0.0;
  double sigma = 0.0;
};

struct RegressionPosteriorMeans {
  double a = 0.0;
  double b = 0.0;
  double sigma = 0.0;
  double sigma2 = 0.0;
  double log_sigma = 0.0;
};

/// Draws of (a, b, sigma) stored as parameter columns 0, 1, 2.
class RegressionFit {
 public:
  RegressionFit(RegressionFlatSpec data, OlsSummary ols, ParameterDraws draws)
      : data_(std::move(data)), ols_(ols), draws_(std::move(draws)) {}

  std::size_t draws() const { return draws_.draws(); }
  const ParameterDraws& parameter_draws() const { return draws_; }

  LogLikMatrix pointwise_loglik(std::span<const std::size_t> targets) const {
    LogLikMatrix ll(draws_.draws(), targets.size());
    for (std::size_t j = 0; j < targets.size(); ++j) {
      const double xj = data_.x[targets[j]];
      const double yj = data_.y[targets[j]];
      auto col = ll.column_mut(j);
      for (std::size_t s = 0; s < draws_.draws(); ++s) {
        const double sigma = draws_(s, 2);
        col[s] = normal_logpdf(yj, draws_(s, 0) + draws_(s, 1) * xj, sigma * sigma);
      }
    }
    ll.validate();
    return ll;
  }

  /// Full-data log-likelihood per draw via the residual sum of squares
  /// decomposition RSS(a, b) = RSS_ols + n (da + db xbar)^2 + db^2 Sxx.
  std::vector<double> total_loglik() const {
    const auto full = ordinary_least_squares(data_.x, data_.y);
    const auto n = static_cast<double>(full.n);
    std::vector<double> out(draws_.draws());
    for (std::size_t s = 0; s < draws_.draws(); ++s) {
      const double da = draws_(s, 0) - full.a;
      const double db = draws_(s, 1) - full.b;
      const double shift = da + db * full.xbar;
      const double rss = full.rss + n * shift * shift + db * db * full.sxx;
      const double sigma2 = draws_(s, 2) * draws_(s, 2);
      out[s] = -0.5 * n * (kLog2Pi + std::log(sigma2)) - 0.5 * rss / sigma2;
    }
    return out;
  }

  /// Maximum likelihood estimate on the training data; sigma uses divisor n.
  RegressionEstimates mle() const {
    return {ols_.a, ols_.b, std::sqrt(ols_.rss / static_cast<double>(ols_.n))};
  }

  RegressionPosteriorMeans posterior_means() const {
    RegressionPosteriorMeans pm;
    const auto S = static_cast<double>(draws_.draws());
    for (std::size_t s = 0; s < draws_.draws(); ++s) {
      const double sigma = draws_(s, 2);
      pm.a += draws_(s, 0);
      pm.b += draws_(s, 1);
      pm.sigma += sigma;
      pm.sigma2 += sigma * sigma;
      pm.log_sigma += std::log(sigma);
    }
    pm.a /= S;
    pm.b /= S;
    pm.sigma /= S;
    pm.sigma2 /= S;
    pm.log_sigma /= S;
    return pm;
  }

  double loglik_at(double a, double b, double sigma) const {
    double total = 0.0;
    for (std::size_t i = 0; i < data_.y.size(); ++i) {
      total += normal_logpdf(data_.y[i], a + b * data_.x[i], sigma * sigma);
    }
    return total;
  }

  /// log p(y | posterior mean), the scale's mean taken in the given
  /// parameterization.
  double lpd_at_posterior_mean(ScaleParameterization param = ScaleParameterization::sigma) const {
    const auto pm = posterior_means();
    double sigma = pm.sigma;
    if (param == ScaleParameterization::sigma2) sigma = std::sqrt(pm.sigma2);
    if (param == ScaleParameterization::log_sigma) sigma = std::exp(pm.log_sigma);
    return loglik_at(pm.a, pm.b, sigma);
  }

  /// Three estimated parameters: a, b, sigma.
  PointEstimateLogLik mle_loglik() const {
    const auto e = mle();
    return {loglik_at(e.a, e.b, e.sigma), EstimateKind::mle, 3};
  }

 private:
  RegressionFlatSpec data_;
  OlsSummary ols_;
  ParameterDraws draws_;
};

/// Fits to all points except `exclude`; the fit can still evaluate the
/// excluded point.
inline RegressionFit regression_fit(const RegressionFlatSpec& spec, std::size_t draws, std::uint64_t seed,
                                    std::optional<std::size_t> exclude = std::nullopt) {
  require_draws(draws);
  if (spec.x.size() != spec.y.size()) throw std::invalid_argument("x and y must have equal length");
  std::vector<double> xt, yt;
  for (std::size_t i = 0; i < spec.y.size(); ++i) {
    if (exclude && *exclude == i) continue;
    xt.push_back(spec.x[i]);
    yt.push_back(spec.y[i]);
  }
  const auto ols = ordinary_least_squares(xt, yt);
  const auto n = static_cast<double>(ols.n);
  const double dof = n - 2.0;
  const double s2 = ols.rss / dof;

  // Cholesky factor of (X'X)^-1 for X = [1, x].
  const double v11 = 1.0 / n + ols.xbar * ols.xbar / ols.sxx;
  const double v21 = -ols.xbar / ols.sxx;
  const double v22 = 1.0 / ols.sxx;
  const double l11 = std::sqrt(v11);
  const double l21 = v21 / l11;
  const double l22 = std::sqrt(std::max(0.0, v22 - l21 * l21));

  auto eng = make_engine(seed);
  ParameterDraws out(draws, 3);
  for (std::size_t s = 0; s < draws; ++s) {
    const double sigma2 = dof * s2 / chi_squared(eng, dof);
    const double sigma = std::sqrt(sigma2);
    const double z1 = standard_normal(eng);
    const double z2 = standard_normal(eng);
    out(s, 0) = ols.a + sigma * l11 * z1;
    out(s, 1) = ols.b + sigma * (l21 * z1 + l22 * z2);
    out(s, 2) = sigma;
  }
  return RegressionFit(spec, ols, std::move(out));
}

struct RegressionModel {
  using data_type = RegressionFlatSpec;

  std::size_t num_points(const data_type& d) const { return d.y.size(); }

  RegressionFit fit(const data_type& d, std::optional<std::size_t> exclude, std::size_t draws,
                    std::uint64_t seed) const {
    return regression_fit(d, draws, seed, exclude);
  }
};

}  // namespace infocrit

#endif  // INFOCRIT_MODELS_REGRESSION_HPP
