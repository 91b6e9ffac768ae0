#ifndef INFOCRIT_MODELS_COMMON_HPP
#define INFOCRIT_MODELS_COMMON_HPP

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace infocrit {

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;  // log(2 pi)

inline double normal_logpdf(double y, double mean, double variance) {
  const double d = y - mean;
  return -0.5 * (kLog2Pi + std::log(variance)) - 0.5 * d * d / variance;
}

/// S x P parameter draws, draw-major.
class ParameterDraws {
 public:
  ParameterDraws() = default;
  ParameterDraws(std::size_t draws, std::size_t params)
      : draws_(draws), params_(params), values_(draws * params, 0.0) {}

  std::size_t draws() const noexcept { return draws_; }
  std::size_t params() const noexcept { return params_; }
  double operator()(std::size_t s, std::size_t p) const { return values_[s * params_ + p]; }
  double& operator()(std::size_t s, std::size_t p) { return values_[s * params_ + p]; }

  double column_mean(std::size_t p) const {
    double sum = 0.0;
    for (std::size_t s = 0; s < draws_; ++s) sum += (*this)(s, p);
    return sum / static_cast<double>(draws_);
  }

  std::vector<double> column(std::size_t p) const {
    std::vector<double> out(draws_);
    for (std::size_t s = 0; s < draws_; ++s) out[s] = (*this)(s, p);
    return out;
  }

 private:
  std::size_t draws_ = 0;
  std::size_t params_ = 0;
  std::vector<double> values_;
};

inline void require_draws(std::size_t draws) {
  if (draws == 0) throw std::invalid_argument("number of draws must be positive");
}

}  // namespace infocrit

#endif  // INFOCRIT_MODELS_COMMON_HPP
