#ifndef SIU_MATH_HPP
#define SIU_MATH_HPP

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "siu/errors.hpp"

namespace siu {

template <typename Scalar>
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using Eigen::ArrayXd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// ln sum_i exp(v_i), computed with the usual max shift. Safe for inputs as
// small as -1e308; an all-equal input of value c returns c + ln(n) exactly.
template <typename Derived>
typename Derived::Scalar log_sum_exp(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.size() == 0) throw ConfigError("log_sum_exp: empty input");
  const Scalar shift = v.maxCoeff();
  if (!std::isfinite(static_cast<double>(shift))) return shift;
  return shift + std::log((v.derived().array() - shift).exp().sum());
}

// ln of the arithmetic mean of exp(v_i). The shifted sum of an n-fold
// duplicated value is exactly n, so duplication maps a value to itself
// bit-for-bit (and n = 1 is the identity).
template <typename Derived>
typename Derived::Scalar log_mean_exp(const Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  if (v.size() == 0) throw ConfigError("log_mean_exp: empty input");
  const Scalar shift = v.maxCoeff();
  if (!std::isfinite(static_cast<double>(shift))) return shift;
  const Scalar s = (v.derived().array() - shift).exp().sum();
  return shift + std::log(s / static_cast<Scalar>(v.size()));
}

// softmax(logits / temperature). Exact ties share weight equally.
template <typename Derived>
ArrayX<typename Derived::Scalar> softmax(const Eigen::DenseBase<Derived>& logits,
                                         typename Derived::Scalar temperature = 1) {
  using Scalar = typename Derived::Scalar;
  if (logits.size() == 0) throw ConfigError("softmax: empty input");
  if (!(temperature > 0)) throw ConfigError("softmax: temperature must be > 0");
  ArrayX<Scalar> scaled = logits.derived().array() / temperature;
  ArrayX<Scalar> w = (scaled - scaled.maxCoeff()).exp();
  return w / w.sum();
}

// 1 / (1 + exp(-z)) without overflow; output clamped to the open interval
// (0, 1) so downstream logs and logits stay finite.
inline double sigmoid(double z) {
  double f;
  if (z >= 0) {
    f = 1.0 / (1.0 + std::exp(-z));
  } else {
    const double e = std::exp(z);
    f = e / (1.0 + e);
  }
  const double lo = std::numeric_limits<double>::denorm_min();
  const double hi = std::nextafter(1.0, 0.0);
  return std::fmin(std::fmax(f, lo), hi);
}

}  // namespace siu

#endif  // SIU_MATH_HPP
