#include "betafact/divergence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace betafact {

namespace {

void check_element_domain(double y, double x, Beta beta) {
  if (!(x > 0.0))
    throw std::domain_error("beta_divergence: model entry must be positive, got " +
                            std::to_string(x));
  if (y < 0.0)
    throw std::domain_error("beta_divergence: data entry must be nonnegative, got " +
                            std::to_string(y));
  if (beta.value <= 0.0 && y == 0.0)
    throw std::domain_error(
        "beta_divergence: data entry 0 is outside the domain for beta <= 0 "
        "(enable a data floor to clamp zeros)");
}

void check_shapes(const Matrix& y, const Matrix& x) {
  if (y.rows() != x.rows() || y.cols() != x.cols())
    throw std::invalid_argument(
        "beta_divergence: shape mismatch, " + std::to_string(y.rows()) + "x" +
        std::to_string(y.cols()) + " vs " + std::to_string(x.rows()) + "x" +
        std::to_string(x.cols()));
}

}  // namespace

double beta_divergence(double y, double x, Beta beta) {
  check_element_domain(y, x, beta);
  const double b = beta.value;
  if (b == 2.0) {
    const double r = y - x;
    return 0.5 * r * r;
  }
  if (b == 1.0) {
    return y > 0.0 ? y * std::log(y / x) - y + x : x;
  }
  if (b == 0.0) {
    const double r = y / x;
    return r - std::log(r) - 1.0;
  }
  const double yb = y > 0.0 ? std::pow(y, b) : 0.0;
  return (yb + (b - 1.0) * std::pow(x, b) - b * y * std::pow(x, b - 1.0)) /
         (b * (b - 1.0));
}

double beta_divergence(const Matrix& y, const Matrix& x, Beta beta) {
  check_shapes(y, x);
  double total = 0.0;
  for (Index n = 0; n < y.cols(); ++n)
    for (Index l = 0; l < y.rows(); ++l)
      total += beta_divergence(y(l, n), x(l, n), beta);
  return total;
}

GradientSplit beta_divergence_gradient(double y, double x, Beta beta) {
  check_element_domain(y, x, beta);
  const double b = beta.value;
  if (b == 2.0) return {x, y};
  if (b == 1.0) return {1.0, y / x};
  if (b == 0.0) return {1.0 / x, y / (x * x)};
  return {std::pow(x, b - 1.0), y * std::pow(x, b - 2.0)};
}

Matrix elementwise_pow(const Matrix& values, double exponent) {
  if (exponent == 0.0) return Matrix::Ones(values.rows(), values.cols());
  if (exponent == 1.0) return values;
  if (exponent == 2.0) return values.array().square();
  if (exponent == -1.0) return values.array().inverse();
  if (exponent == -2.0) return values.array().square().inverse();
  if (exponent == 0.5) return values.array().sqrt();
  if (exponent == -0.5) return values.array().rsqrt();
  return values.array().pow(exponent);
}

}  // namespace betafact
