#ifndef INFOCRIT_LOO_HPP
#define INFOCRIT_LOO_HPP

// Exact leave-one-out cross-validation by refitting, with the first-order
// (Burman) bias correction.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "infocrit/draws.hpp"
#include "infocrit/parallel.hpp"
#include "infocrit/rng.hpp"

namespace infocrit {

/// Result of fitting a model: evaluates log p(y_j | theta^s) for any data
/// point j of the dataset it was fitted from, held out or not.
template <class F>
concept PosteriorFit = requires(const F& fit, std::span<const std::size_t> targets) {
  { fit.pointwise_loglik(targets) } -> std::same_as<LogLikMatrix>;
  { fit.draws() } -> std::convertible_to<std::size_t>;
};

/// A model that can be refit with one point excluded. fit() must be a pure
/// function of its arguments so that refits are bit-reproducible and safe to
/// run concurrently.
template <class M>
concept FittableModel =
    requires(const M& model, const typename M::data_type& data, std::optional<std::size_t> exclude,
             std::size_t draws, std::uint64_t seed) {
      typename M::data_type;
      { model.num_points(data) } -> std::convertible_to<std::size_t>;
      { model.fit(data, exclude, draws, seed) } -> PosteriorFit;
    };

template <FittableModel M>
std::vector<std::size_t> all_points(const M& model, const typename M::data_type& data) {
  std::vector<std::size_t> idx(model.num_points(data));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

/// Per-fold outputs shared by lppd_loo and lppd_bar_minus_i.
struct LooFolds {
  std::vector<double> held_out;     // log p_post(-i)(y_i)
  std::vector<double> held_out_se;  // delta-method MC standard error of held_out[i]
  std::vector<double> fold_lppd;    // sum_j log p_post(-i)(y_j)
};

/// Fold i is fitted with seed derive_seed(seed, i), so folds can run in any
/// order or concurrently and still give identical results.
template <FittableModel M>
LooFolds loo_folds(const M& model, const typename M::data_type& data, std::size_t draws,
                   std::uint64_t seed, unsigned threads = 1) {
  const std::size_t n = model.num_points(data);
  if (n < 2) throw std::invalid_argument("leave-one-out needs at least 2 data points");
  const auto targets = all_points(model, data);
  LooFolds out;
  out.held_out.resize(n);
  out.held_out_se.resize(n);
  out.fold_lppd.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto fit = model.fit(data, i, draws, derive_seed(seed, i));
    const LogLikMatrix ll = fit.pointwise_loglik(targets);
    out.held_out[i] = log_mean_exp(ll.column(i));
    out.held_out_se[i] = ll.draws() >= 2 ? log_mean_exp_se(ll.column(i)) : 0.0;
    out.fold_lppd[i] = lppd(ll);
  });
  return out;
}

struct LooEstimate {
  double lppd_loo = 0.0;
  std::vector<double> per_point;
};

template <FittableModel M>
LooEstimate lppd_loo(const M& model, const typename M::data_type& data, std::size_t draws,
                     std::uint64_t seed, unsigned threads = 1) {
  auto folds = loo_folds(model, data, draws, seed, threads);
  LooEstimate out;
  for (double v : folds.held_out) out.lppd_loo += v;
  out.per_point = std::move(folds.held_out);
  return out;
}

inline double lppd_bar_minus_i(const LooFolds& folds) {
  double total = 0.0;
  for (double v : folds.fold_lppd) total += v;
  return total / static_cast<double>(folds.fold_lppd.size());
}

/// (1/n) sum_i sum_j log p_post(-i)(y_j), from the same refits as lppd_loo.
template <FittableModel M>
double lppd_bar_minus_i(const M& model, const typename M::data_type& data, std::size_t draws,
                        std::uint64_t seed, unsigned threads = 1) {
  return lppd_bar_minus_i(loo_folds(model, data, draws, seed, threads));
}

struct BiasCorrection {
  double b = 0.0;
  double lppd_cloo = 0.0;
};

inline BiasCorrection bias_correct(double lppd_full, double lppd_bar, double lppd_loo) {
  if (!std::isfinite(lppd_full) || !std::isfinite(lppd_bar) || !std::isfinite(lppd_loo)) {
    throw NumericError("non-finite input to LOO bias correction");
  }
  const double b = lppd_full - lppd_bar;
  return {b, lppd_loo + b};
}

inline double p_loo(double lppd_full, double lppd_loo) { return lppd_full - lppd_loo; }
inline double p_cloo(double lppd_bar, double lppd_loo) { return lppd_bar - lppd_loo; }

struct LooReport {
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  double lppd = 0.0;  // full-data lppd the corrections are relative to
  double lppd_loo = 0.0;
  double lppd_loo_se = 0.0;
  double lppd_bar_minus_i = 0.0;
  double b = 0.0;
  double lppd_cloo = 0.0;
  double p_loo = 0.0;
  double p_cloo = 0.0;
  std::vector<double> per_point;
  std::vector<double> per_point_se;
};

inline LooReport make_loo_report(const LooFolds& folds, double lppd_full, std::size_t draws,
                                 std::uint64_t seed) {
  LooReport r;
  r.draws = draws;
  r.seed = seed;
  r.lppd = lppd_full;
  double var = 0.0;
  for (std::size_t i = 0; i < folds.held_out.size(); ++i) {
    r.lppd_loo += folds.held_out[i];
    var += folds.held_out_se[i] * folds.held_out_se[i];
  }
  r.lppd_loo_se = std::sqrt(var);
  r.lppd_bar_minus_i = lppd_bar_minus_i(folds);
  const auto bc = bias_correct(lppd_full, r.lppd_bar_minus_i, r.lppd_loo);
  r.b = bc.b;
  r.lppd_cloo = bc.lppd_cloo;
  r.p_loo = p_loo(lppd_full, r.lppd_loo);
  r.p_cloo = p_cloo(r.lppd_bar_minus_i, r.lppd_loo);
  r.per_point = folds.held_out;
  r.per_point_se = folds.held_out_se;
  return r;
}

/// Full LOO report against a supplied full-data lppd.
template <FittableModel M>
LooReport run_loo(const M& model, const typename M::data_type& data, double lppd_full,
                  std::size_t draws, std::uint64_t seed, unsigned threads = 1) {
  return make_loo_report(loo_folds(model, data, draws, seed, threads), lppd_full, draws, seed);
}

/// Full LOO report; the full-data lppd comes from fit(data, none, draws, seed).
template <FittableModel M>
LooReport run_loo(const M& model, const typename M::data_type& data, std::size_t draws,
                  std::uint64_t seed, unsigned threads = 1) {
  const auto full = model.fit(data, std::nullopt, draws, seed);
  const double lppd_full = lppd(full.pointwise_loglik(all_points(model, data)));
  return run_loo(model, data, lppd_full, draws, seed, threads);
}

}  // namespace infocrit

#endif  // INFOCRIT_LOO_HPP
