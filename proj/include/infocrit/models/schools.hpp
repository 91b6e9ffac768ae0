#ifndef INFOCRIT_MODELS_SCHOOLS_HPP
#define INFOCRIT_MODELS_SCHOOLS_HPP

// Normal measurements with known standard errors, y_j ~ N(theta_j, sigma_j^2),
// under three pooling assumptions:
//   none         theta_j independent with flat priors
//   complete     theta_j = theta for all j, flat prior on theta
//   hierarchical theta_j ~ N(mu, tau^2), p(mu, tau) ∝ 1
//
// The hierarchical posterior is sampled exactly by composition: tau from its
// gridded marginal p(tau | y), then mu | tau, y, then theta | mu, tau, y.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "infocrit/criteria.hpp"
#include "infocrit/draws.hpp"
#include "infocrit/errors.hpp"
#include "infocrit/models/common.hpp"
#include "infocrit/rng.hpp"

namespace infocrit {

enum class Pooling { none, complete, hierarchical };
enum class PredictionMode { existing_groups, new_groups };

struct EightSchoolsData {
  std::vector<std::string> labels;
  std::vector<double> y;
  std::vector<double> sigma;

  std::size_t J() const { return y.size(); }

  void validate() const {
    if (y.empty()) throw std::invalid_argument("need at least one group");
    if (y.size() != sigma.size()) throw std::invalid_argument("y and sigma must have equal length");
    for (double s : sigma) {
      if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("sigma_j must be positive");
    }
    for (double v : y) {
      if (!std::isfinite(v)) throw NumericError("non-finite group estimate");
    }
  }

  /// Rubin (1981) SAT coaching experiments.
  static EightSchoolsData rubin1981() {
    return {{"A", "B", "C", "D", "E", "F", "G", "H"},
            {28, 8, -3, 7, -1, 1, 18, 12},
            {15, 10, 16, 11, 9, 11, 10, 18}};
  }
};

/// Grid for the marginal posterior of tau. `points` equal cells cover
/// [0, tau_max]; tau_max defaults to 2 max_j(|y_j| + sigma_j). A pinned value
/// bypasses the grid and fixes tau (tau = 0 reproduces complete pooling).
struct TauGrid {
  std::size_t points = 2000;
  std::optional<double> tau_max;
  std::optional<double> pinned;

  double upper(const EightSchoolsData& d) const {
    if (tau_max) return *tau_max;
    double hi = 0.0;
    for (std::size_t j = 0; j < d.J(); ++j) hi = std::max(hi, std::abs(d.y[j]) + d.sigma[j]);
    return 2.0 * hi;
  }
};

/// Precision-weighted mean of the included groups given tau.
struct MuConditional {
  double mean = 0.0;
  double variance = 0.0;
  double log_marginal_tau = 0.0;  // log p(tau | y) up to a constant, flat prior
};

inline MuConditional mu_given_tau(const EightSchoolsData& d, const std::vector<bool>& included,
                                  double tau) {
  double wsum = 0.0, wy = 0.0, logdet = 0.0;
  for (std::size_t j = 0; j < d.J(); ++j) {
    if (!included[j]) continue;
    const double v = d.sigma[j] * d.sigma[j] + tau * tau;
    wsum += 1.0 / v;
    wy += d.y[j] / v;
    logdet += std::log(v);
  }
  MuConditional c;
  c.mean = wy / wsum;
  c.variance = 1.0 / wsum;
  double quad = 0.0;
  for (std::size_t j = 0; j < d.J(); ++j) {
    if (!included[j]) continue;
    const double v = d.sigma[j] * d.sigma[j] + tau * tau;
    quad += (d.y[j] - c.mean) * (d.y[j] - c.mean) / v;
  }
  c.log_marginal_tau = 0.5 * std::log(c.variance) - 0.5 * logdet - 0.5 * quad;
  return c;
}

/// Gridded p(tau | y): cell midpoints and normalized cell probabilities.
struct TauPosterior {
  double cell_width = 0.0;
  std::vector<double> tau;   // cell midpoints
  std::vector<double> mass;  // sums to 1
  std::vector<double> cdf;

  /// Density estimate at the midpoints (mass / width).
  std::vector<double> density() const {
    std::vector<double> out(mass.size());
    for (std::size_t c = 0; c < mass.size(); ++c) out[c] = mass[c] / cell_width;
    return out;
  }
};

inline TauPosterior tau_posterior(const EightSchoolsData& d, const std::vector<bool>& included,
                                  const TauGrid& grid) {
  if (grid.points == 0) throw std::invalid_argument("tau grid needs at least one point");
  const double hi = grid.upper(d);
  if (!(hi > 0.0)) throw std::invalid_argument("tau grid upper bound must be positive");
  TauPosterior p;
  p.cell_width = hi / static_cast<double>(grid.points);
  p.tau.resize(grid.points);
  p.mass.resize(grid.points);
  p.cdf.resize(grid.points);
  double peak = -INFINITY;
  std::vector<double> logp(grid.points);
  for (std::size_t c = 0; c < grid.points; ++c) {
    p.tau[c] = (static_cast<double>(c) + 0.5) * p.cell_width;
    logp[c] = mu_given_tau(d, included, p.tau[c]).log_marginal_tau;
    peak = std::max(peak, logp[c]);
  }
  double total = 0.0;
  for (std::size_t c = 0; c < grid.points; ++c) {
    p.mass[c] = std::exp(logp[c] - peak);
    total += p.mass[c];
  }
  double acc = 0.0;
  for (std::size_t c = 0; c < grid.points; ++c) {
    p.mass[c] /= total;
    acc += p.mass[c];
    p.cdf[c] = acc;
  }
  p.cdf.back() = 1.0;
  return p;
}

/// Posterior draws for one fit. theta holds one column per group; groups
/// that were excluded carry their conditional prior draw when the pooling
/// allows it (N(mu, tau^2) or the shared theta).
class SchoolsFit {
 public:
  SchoolsFit(EightSchoolsData data, Pooling pooling, PredictionMode mode, std::vector<bool> included,
             ParameterDraws theta, ParameterDraws hyper)
      : data_(std::move(data)),
        pooling_(pooling),
        mode_(mode),
        included_(std::move(included)),
        theta_(std::move(theta)),
        hyper_(std::move(hyper)) {}

  std::size_t draws() const { return theta_.draws(); }
  Pooling pooling() const { return pooling_; }
  const ParameterDraws& theta() const { return theta_; }
  /// Columns (mu, tau); only populated for the hierarchical model.
  const ParameterDraws& hyperparameters() const { return hyper_; }

  /// Group j can be predicted unless it was held out under no pooling, or
  /// new groups are requested under no pooling.
  bool can_predict(std::size_t j) const {
    if (pooling_ != Pooling::none) return true;
    return mode_ == PredictionMode::existing_groups && included_[j];
  }

  LogLikMatrix pointwise_loglik(std::span<const std::size_t> targets) const {
    for (std::size_t j : targets) {
      if (!can_predict(j)) {
        throw ModelRefusal("no-pooling model has no information about group " + std::to_string(j + 1));
      }
    }
    LogLikMatrix ll(theta_.draws(), targets.size());
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const std::size_t j = targets[k];
      const double var = data_.sigma[j] * data_.sigma[j];
      auto col = ll.column_mut(k);
      for (std::size_t s = 0; s < theta_.draws(); ++s) col[s] = normal_logpdf(data_.y[j], theta_(s, j), var);
    }
    ll.validate();
    return ll;
  }

  /// Full-data log-likelihood per draw,
  /// -1/2 sum_j [log(2 pi sigma_j^2) + (y_j - theta_j)^2 / sigma_j^2].
  std::vector<double> total_loglik() const {
    for (std::size_t j = 0; j < data_.J(); ++j) {
      if (!can_predict(j)) throw ModelRefusal();
    }
    std::vector<double> out(theta_.draws(), 0.0);
    for (std::size_t s = 0; s < theta_.draws(); ++s) {
      double acc = 0.0;
      for (std::size_t j = 0; j < data_.J(); ++j) {
        const double r = (data_.y[j] - theta_(s, j)) / data_.sigma[j];
        acc += kLog2Pi + 2.0 * std::log(data_.sigma[j]) + r * r;
      }
      out[s] = -0.5 * acc;
    }
    return out;
  }

  std::vector<double> theta_posterior_mean() const {
    std::vector<double> out(data_.J());
    for (std::size_t j = 0; j < data_.J(); ++j) out[j] = theta_.column_mean(j);
    return out;
  }

  double loglik_at(std::span<const double> theta) const {
    double total = 0.0;
    for (std::size_t j = 0; j < data_.J(); ++j) {
      total += normal_logpdf(data_.y[j], theta[j], data_.sigma[j] * data_.sigma[j]);
    }
    return total;
  }

  /// log p(y | E(theta | y)) with the mean taken over the draws.
  double lpd_at_posterior_mean() const { return loglik_at(theta_posterior_mean()); }

  /// Maximum likelihood point for the pooled and unpooled models; the
  /// hierarchical model has none.
  std::optional<PointEstimateLogLik> mle_loglik() const {
    std::vector<double> theta(data_.J());
    if (pooling_ == Pooling::none) {
      for (std::size_t j = 0; j < data_.J(); ++j) theta[j] = data_.y[j];
      return PointEstimateLogLik{loglik_at(theta), EstimateKind::mle, static_cast<int>(data_.J())};
    }
    if (pooling_ == Pooling::complete) {
      double w = 0.0, wy = 0.0;
      for (std::size_t j = 0; j < data_.J(); ++j) {
        if (!included_[j]) continue;
        w += 1.0 / (data_.sigma[j] * data_.sigma[j]);
        wy += data_.y[j] / (data_.sigma[j] * data_.sigma[j]);
      }
      std::fill(theta.begin(), theta.end(), wy / w);
      return PointEstimateLogLik{loglik_at(theta), EstimateKind::mle, 1};
    }
    return std::nullopt;
  }

 private:
  EightSchoolsData data_;
  Pooling pooling_;
  PredictionMode mode_;
  std::vector<bool> included_;
  ParameterDraws theta_;
  ParameterDraws hyper_;
};

struct SchoolsModel {
  using data_type = EightSchoolsData;

  Pooling pooling = Pooling::hierarchical;
  PredictionMode prediction = PredictionMode::existing_groups;
  TauGrid grid{};

  std::size_t num_points(const data_type& d) const { return d.J(); }

  SchoolsFit fit(const data_type& d, std::optional<std::size_t> exclude, std::size_t draws,
                 std::uint64_t seed) const {
    d.validate();
    require_draws(draws);
    const std::size_t J = d.J();
    std::vector<bool> included(J, true);
    if (exclude) {
      if (*exclude >= J) throw std::out_of_range("excluded group index out of range");
      included[*exclude] = false;
    }
    if (std::none_of(included.begin(), included.end(), [](bool b) { return b; }) &&
        pooling != Pooling::none) {
      throw std::invalid_argument("pooled models need at least one training group");
    }

    auto eng = make_engine(seed);
    ParameterDraws theta(draws, J);
    ParameterDraws hyper;

    auto fill_new_groups = [&](std::size_t s, double mu, double tau) {
      for (std::size_t j = 0; j < J; ++j) theta(s, j) = mu + tau * standard_normal(eng);
    };

    switch (pooling) {
      case Pooling::none:
        for (std::size_t s = 0; s < draws; ++s) {
          for (std::size_t j = 0; j < J; ++j) {
            theta(s, j) = included[j] ? d.y[j] + d.sigma[j] * standard_normal(eng) : 0.0;
          }
        }
        break;
      case Pooling::complete: {
        const auto c = mu_given_tau(d, included, 0.0);
        const double sd = std::sqrt(c.variance);
        for (std::size_t s = 0; s < draws; ++s) {
          const double t = c.mean + sd * standard_normal(eng);
          for (std::size_t j = 0; j < J; ++j) theta(s, j) = t;
        }
        break;
      }
      case Pooling::hierarchical: {
        const auto& inc = included;
        hyper = ParameterDraws(draws, 2);
        std::optional<TauPosterior> post;
        if (!grid.pinned) post = tau_posterior(d, inc, grid);
        for (std::size_t s = 0; s < draws; ++s) {
          double tau = 0.0;
          if (grid.pinned) {
            tau = *grid.pinned;
          } else {
            const double u = uniform01(eng);
            auto it = std::upper_bound(post->cdf.begin(), post->cdf.end(), u);
            const auto cell = static_cast<std::size_t>(
                std::min<std::ptrdiff_t>(it - post->cdf.begin(), post->cdf.size() - 1));
            tau = (static_cast<double>(cell) + uniform01(eng)) * post->cell_width;
          }
          const auto c = mu_given_tau(d, inc, tau);
          const double mu = c.mean + std::sqrt(c.variance) * standard_normal(eng);
          hyper(s, 0) = mu;
          hyper(s, 1) = tau;
          if (prediction == PredictionMode::new_groups) {
            fill_new_groups(s, mu, tau);
            continue;
          }
          for (std::size_t j = 0; j < J; ++j) {
            if (!included[j] || tau == 0.0) {
              theta(s, j) = mu + tau * standard_normal(eng);
              continue;
            }
            const double prec_data = 1.0 / (d.sigma[j] * d.sigma[j]);
            const double prec_prior = 1.0 / (tau * tau);
            const double prec = prec_data + prec_prior;
            const double centre = (d.y[j] * prec_data + mu * prec_prior) / prec;
            theta(s, j) = centre + standard_normal(eng) / std::sqrt(prec);
          }
        }
        break;
      }
    }
    return SchoolsFit(d, pooling, prediction, std::move(included), std::move(theta), std::move(hyper));
  }
};

}  // namespace infocrit

#endif  // INFOCRIT_MODELS_SCHOOLS_HPP
