#ifndef INFOCRIT_MODELS_NORMAL_MEAN_HPP
#define INFOCRIT_MODELS_NORMAL_MEAN_HPP

// y_i ~ N(theta, 1) with prior theta ~ N(mu0, 1/m); m = 0 is the flat prior.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "infocrit/draws.hpp"
#include "infocrit/models/common.hpp"
#include "infocrit/rng.hpp"

namespace infocrit {

/// Sufficient statistics plus prior. s2y is the sample variance (divisor
/// n - 1; 0 when n == 1); m is the prior precision.
struct NormalConjugateSpec {
  std::size_t n = 0;
  double ybar = 0.0;
  double s2y = 0.0;
  double m = 0.0;
  double mu0 = 0.0;

  static NormalConjugateSpec from_data(std::span<const double> y, double m = 0.0, double mu0 = 0.0) {
    NormalConjugateSpec spec;
    spec.n = y.size();
    spec.m = m;
    spec.mu0 = mu0;
    if (y.empty()) return spec;
    double sum = 0.0;
    for (double v : y) sum += v;
    spec.ybar = sum / static_cast<double>(y.size());
    if (y.size() >= 2) {
      double ss = 0.0;
      for (double v : y) ss += (v - spec.ybar) * (v - spec.ybar);
      spec.s2y = ss / static_cast<double>(y.size() - 1);
    }
    return spec;
  }

  void validate() const {
    if (m < 0.0 || !std::isfinite(m)) throw std::invalid_argument("prior precision m must be >= 0");
    if (m + static_cast<double>(n) <= 0.0) {
      throw std::invalid_argument("posterior is improper: need m + n > 0");
    }
  }

  double precision() const { return m + static_cast<double>(n); }
  double posterior_mean() const { return (m * mu0 + static_cast<double>(n) * ybar) / precision(); }
  double posterior_variance() const { return 1.0 / precision(); }
};

inline std::vector<double> normal_posterior_draws(const NormalConjugateSpec& spec, std::size_t draws,
                                                  std::uint64_t seed) {
  spec.validate();
  require_draws(draws);
  auto eng = make_engine(seed);
  const double centre = spec.posterior_mean();
  const double sd = std::sqrt(spec.posterior_variance());
  std::vector<double> theta(draws);
  for (auto& t : theta) t = centre + sd * standard_normal(eng);
  return theta;
}

/// Entry (s, j) = log N(y_{targets[j]} | theta^s, 1).
inline LogLikMatrix normal_pointwise_loglik(std::span<const double> y, std::span<const double> theta,
                                            std::span<const std::size_t> targets) {
  LogLikMatrix ll(theta.size(), targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j) {
    const double yj = y[targets[j]];
    auto col = ll.column_mut(j);
    for (std::size_t s = 0; s < theta.size(); ++s) {
      const double d = yj - theta[s];
      col[s] = -0.5 * kLog2Pi - 0.5 * d * d;
    }
  }
  ll.validate();
  return ll;
}

inline LogLikMatrix normal_pointwise_loglik(std::span<const double> y, std::span<const double> theta) {
  std::vector<std::size_t> all(y.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return normal_pointwise_loglik(y, theta, all);
}

class NormalMeanFit {
 public:
  NormalMeanFit(std::vector<double> y, std::vector<double> theta)
      : y_(std::move(y)), theta_(std::move(theta)) {}

  std::size_t draws() const { return theta_.size(); }
  const std::vector<double>& theta() const { return theta_; }

  LogLikMatrix pointwise_loglik(std::span<const std::size_t> targets) const {
    return normal_pointwise_loglik(y_, theta_, targets);
  }

  /// Full-data log-likelihood per draw from the sufficient statistics,
  /// -n/2 log(2 pi) - [n (ybar - theta)^2 + (n - 1) s2y] / 2.
  std::vector<double> total_loglik() const {
    const auto stats = NormalConjugateSpec::from_data(y_);
    const auto n = static_cast<double>(stats.n);
    std::vector<double> out(theta_.size());
    for (std::size_t s = 0; s < theta_.size(); ++s) {
      const double d = stats.ybar - theta_[s];
      out[s] = -0.5 * n * kLog2Pi - 0.5 * (n * d * d + (n - 1.0) * stats.s2y);
    }
    return out;
  }

  double posterior_mean() const {
    double sum = 0.0;
    for (double t : theta_) sum += t;
    return sum / static_cast<double>(theta_.size());
  }

  /// log p(y | theta_hat) at the mean of the draws.
  double lpd_at_posterior_mean() const {
    const double t = posterior_mean();
    double total = 0.0;
    for (double v : y_) total += normal_logpdf(v, t, 1.0);
    return total;
  }

 private:
  std::vector<double> y_;
  std::vector<double> theta_;
};

/// Conjugate normal-mean model as a FittableModel.
struct NormalMeanModel {
  using data_type = std::vector<double>;

  double m = 0.0;
  double mu0 = 0.0;

  std::size_t num_points(const data_type& y) const { return y.size(); }

  NormalMeanFit fit(const data_type& y, std::optional<std::size_t> exclude, std::size_t draws,
                    std::uint64_t seed) const {
    std::vector<double> train;
    train.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!exclude || *exclude != i) train.push_back(y[i]);
    }
    const auto spec = NormalConjugateSpec::from_data(train, m, mu0);
    return NormalMeanFit(y, normal_posterior_draws(spec, draws, seed));
  }
};

}  // namespace infocrit

#endif  // INFOCRIT_MODELS_NORMAL_MEAN_HPP
