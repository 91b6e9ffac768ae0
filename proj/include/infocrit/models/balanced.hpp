#ifndef INFOCRIT_MODELS_BALANCED_HPP
#define INFOCRIT_MODELS_BALANCED_HPP

// Balanced hierarchical normal model with known hyperparameters:
// y_ij ~ N(theta_j, 1), theta_j ~ N(mu, tau^2), i = 1..n, j = 1..J.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "infocrit/draws.hpp"
#include "infocrit/models/common.hpp"
#include "infocrit/rng.hpp"

namespace infocrit {

/// What counts as one data point for lppd / WAIC / LOO.
enum class Counting { observation, group };

struct BalancedHierarchicalData {
  std::vector<std::vector<double>> groups;  // groups[j][i] = y_ij
  double mu = 0.0;
  double tau = 1.0;

  std::size_t J() const { return groups.size(); }
  std::size_t n() const { return groups.empty() ? 0 : groups.front().size(); }

  void validate() const {
    if (groups.empty() || groups.front().empty()) throw std::invalid_argument("need at least one observation");
    for (const auto& g : groups) {
      if (g.size() != n()) throw std::invalid_argument("groups must be balanced");
    }
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  }
};

/// Independent conjugate posteriors, theta_j | y ~ N((mu/tau^2 + n ybar_j) / (1/tau^2 + n), 1 / (1/tau^2 + n)).
inline ParameterDraws balanced_posterior_draws(const BalancedHierarchicalData& d, std::size_t draws,
                                               std::uint64_t seed) {
  d.validate();
  require_draws(draws);
  const double prior_prec = 1.0 / (d.tau * d.tau);
  const auto n = static_cast<double>(d.n());
  auto eng = make_engine(seed);
  ParameterDraws theta(draws, d.J());
  std::vector<double> centre(d.J());
  for (std::size_t j = 0; j < d.J(); ++j) {
    double sum = 0.0;
    for (double v : d.groups[j]) sum += v;
    centre[j] = (d.mu * prior_prec + sum) / (prior_prec + n);
  }
  const double sd = 1.0 / std::sqrt(prior_prec + n);
  for (std::size_t s = 0; s < draws; ++s) {
    for (std::size_t j = 0; j < d.J(); ++j) theta(s, j) = centre[j] + sd * standard_normal(eng);
  }
  return theta;
}

/// observation: n*J columns ordered group-major (column j*n + i is y_ij);
/// group: J columns, column j summing group j's log densities per draw.
inline LogLikMatrix balanced_hierarchical_loglik(const ParameterDraws& theta,
                                                 const BalancedHierarchicalData& d, Counting counting) {
  d.validate();
  if (theta.params() != d.J()) throw std::invalid_argument("one theta column per group required");
  const std::size_t n = d.n();
  const std::size_t cols = counting == Counting::observation ? n * d.J() : d.J();
  LogLikMatrix ll(theta.draws(), cols);
  for (std::size_t j = 0; j < d.J(); ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double y = d.groups[j][i];
      const std::size_t col_index = counting == Counting::observation ? j * n + i : j;
      auto col = ll.column_mut(col_index);
      for (std::size_t s = 0; s < theta.draws(); ++s) {
        const double r = y - theta(s, j);
        col[s] += -0.5 * kLog2Pi - 0.5 * r * r;
      }
    }
  }
  ll.validate();
  return ll;
}

}  // namespace infocrit

#endif  // INFOCRIT_MODELS_BALANCED_HPP
