#ifndef INFOCRIT_DRAWS_HPP
#define INFOCRIT_DRAWS_HPP

// Reductions over posterior-draw matrices. Every reduction runs left to right
// over the canonical index order, so results are bit-reproducible for a given
// matrix regardless of how callers schedule columns.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "infocrit/errors.hpp"

namespace infocrit {

namespace detail {

inline void require_finite(double v, std::size_t draw, std::size_t point) {
  if (!std::isfinite(v)) {
    throw NumericError("non-finite log density at draw " + std::to_string(draw) + ", point " +
                       std::to_string(point));
  }
}

inline void check_column(std::span<const double> column) {
  if (column.empty()) throw std::invalid_argument("empty draw column");
  for (std::size_t s = 0; s < column.size(); ++s) {
    if (!std::isfinite(column[s])) throw NumericError("non-finite log density");
  }
}

}  // namespace detail

/// S x n matrix of log p(y_i | theta^s) in nats. Storage is point-major so
/// that each column (one data point across all draws) is contiguous.
class LogLikMatrix {
 public:
  LogLikMatrix() = default;

  /// Zero-filled matrix, to be populated with set().
  LogLikMatrix(std::size_t draws, std::size_t points)
      : draws_(draws), points_(points), values_(draws * points, 0.0) {
    if (draws == 0 || points == 0) {
      throw std::invalid_argument("log-likelihood matrix needs at least one draw and one point");
    }
  }

  /// Builds from draw-major rows; rejects ragged input and non-finite entries.
  static LogLikMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
      throw std::invalid_argument("log-likelihood matrix needs at least one draw and one point");
    }
    LogLikMatrix m(rows.size(), rows.front().size());
    for (std::size_t s = 0; s < rows.size(); ++s) {
      if (rows[s].size() != m.points_) {
        throw std::invalid_argument("ragged log-likelihood rows");
      }
      for (std::size_t i = 0; i < m.points_; ++i) m.set(s, i, rows[s][i]);
    }
    return m;
  }

  std::size_t draws() const noexcept { return draws_; }
  std::size_t points() const noexcept { return points_; }

  double operator()(std::size_t draw, std::size_t point) const {
    return values_[point * draws_ + draw];
  }

  void set(std::size_t draw, std::size_t point, double value) {
    detail::require_finite(value, draw, point);
    values_[point * draws_ + draw] = value;
  }

  std::span<const double> column(std::size_t point) const {
    return {values_.data() + point * draws_, draws_};
  }

  std::span<double> column_mut(std::size_t point) {
    return {values_.data() + point * draws_, draws_};
  }

  /// Re-checks the finiteness invariant after column_mut writes.
  void validate() const {
    for (std::size_t i = 0; i < points_; ++i) {
      for (std::size_t s = 0; s < draws_; ++s) detail::require_finite((*this)(s, i), s, i);
    }
  }

  /// Per-draw total log-likelihood, sum over points in index order.
  std::vector<double> row_totals() const {
    std::vector<double> totals(draws_, 0.0);
    for (std::size_t i = 0; i < points_; ++i) {
      const auto col = column(i);
      for (std::size_t s = 0; s < draws_; ++s) totals[s] += col[s];
    }
    return totals;
  }

  /// Sub-matrix made of the given columns, in the given order.
  LogLikMatrix select_points(std::span<const std::size_t> which) const {
    LogLikMatrix out(draws_, which.size());
    for (std::size_t k = 0; k < which.size(); ++k) {
      const auto src = column(which[k]);
      std::copy(src.begin(), src.end(), out.column_mut(k).begin());
    }
    return out;
  }

 private:
  std::size_t draws_ = 0;
  std::size_t points_ = 0;
  std::vector<double> values_;
};

/// Per-point reductions used by lppd, p_WAIC1 and p_WAIC2.
struct ColumnSummary {
  double log_mean = 0.0;  // log (1/S) sum_s exp(a_s)
  double mean_log = 0.0;  // (1/S) sum_s a_s
  double var_log = 0.0;   // sample variance with divisor S-1; 0 when S == 1
};

inline double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("empty draw column");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

/// log of the arithmetic mean of exp(column), shifted by the column maximum.
inline double log_mean_exp(std::span<const double> column) {
  detail::check_column(column);
  const double peak = *std::max_element(column.begin(), column.end());
  double sum = 0.0;
  for (double a : column) sum += std::exp(a - peak);
  return peak + std::log(sum / static_cast<double>(column.size()));
}

inline double sample_variance(std::span<const double> column) {
  if (column.size() < 2) throw std::invalid_argument("variance requires at least 2 draws");
  const double centre = mean(column);
  double ss = 0.0;
  for (double a : column) ss += (a - centre) * (a - centre);
  return ss / static_cast<double>(column.size() - 1);
}

inline double mc_standard_error(std::span<const double> column) {
  return std::sqrt(sample_variance(column) / static_cast<double>(column.size()));
}

/// Delta-method standard error of log_mean_exp(column) under independent draws.
inline double log_mean_exp_se(std::span<const double> column) {
  detail::check_column(column);
  if (column.size() < 2) throw std::invalid_argument("variance requires at least 2 draws");
  const double peak = *std::max_element(column.begin(), column.end());
  std::vector<double> w(column.size());
  for (std::size_t s = 0; s < column.size(); ++s) w[s] = std::exp(column[s] - peak);
  return mc_standard_error(w) / mean(w);
}

/// Both means are taken relative to the column maximum, so a constant column
/// yields log_mean == mean_log exactly.
inline ColumnSummary column_summary(std::span<const double> column) {
  detail::check_column(column);
  const double peak = *std::max_element(column.begin(), column.end());
  double sum_exp = 0.0;
  double sum_dev = 0.0;
  for (double a : column) {
    sum_exp += std::exp(a - peak);
    sum_dev += a - peak;
  }
  const auto S = static_cast<double>(column.size());
  ColumnSummary out;
  out.log_mean = peak + std::log(sum_exp / S);
  out.mean_log = peak + sum_dev / S;
  out.var_log = column.size() >= 2 ? sample_variance(column) : 0.0;
  return out;
}

/// log_mean - mean_log, the per-point p_WAIC1 contribution before the factor 2.
/// Jensen makes this nonnegative; rounding on nearly constant columns can land
/// a few ulp below zero, which is clamped.
inline double jensen_gap(const ColumnSummary& c) { return std::max(0.0, c.log_mean - c.mean_log); }

inline std::vector<ColumnSummary> column_summaries(const LogLikMatrix& m) {
  std::vector<ColumnSummary> out;
  out.reserve(m.points());
  for (std::size_t i = 0; i < m.points(); ++i) out.push_back(column_summary(m.column(i)));
  return out;
}

/// Computed log pointwise predictive density: sum_i log_mean_exp(column i).
inline double lppd(const LogLikMatrix& m) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.points(); ++i) total += log_mean_exp(m.column(i));
  return total;
}

/// (1/S) sum_s sum_i log p(y_i | theta^s).
inline double mean_total_loglik(const LogLikMatrix& m) { return mean(m.row_totals()); }

}  // namespace infocrit

#endif  // INFOCRIT_DRAWS_HPP
