#pragma once

#include "betafact/types.hpp"

namespace betafact {

/// Model entries are clamped to this floor before any divergence or update
/// evaluation, keeping x^(beta-2) finite for beta < 2.
inline constexpr double kModelFloor = 1e-12;

/// Element-wise beta-divergence d_beta(y | x).
///
/// Dispatches to the exact closed forms at beta = 2 (half squared error),
/// beta = 1 (KL) and beta = 0 (IS); everywhere else the generic rational
/// form is used. y = 0 is accepted for beta in (0, 1] (the conventional
/// limit y^beta -> 0, y log y -> 0) and rejected for beta <= 0.
///
/// Throws std::domain_error when x <= 0, y < 0, or (beta <= 0 and y = 0).
double beta_divergence(double y, double x, Beta beta);

/// Matrix aggregate: the sum of element losses over all entries.
/// Accumulation is sequential in column-major order.
double beta_divergence(const Matrix& y, const Matrix& x, Beta beta);

/// The split of the gradient of d_beta with respect to x into a difference
/// of two nonnegative parts: grad = plus - minus with
///   plus = x^(beta-1),  minus = y * x^(beta-2).
struct GradientSplit {
  double plus;
  double minus;
};

GradientSplit beta_divergence_gradient(double y, double x, Beta beta);

/// Entry-wise power with exact fast paths for the exponents produced by
/// beta in {0, 1, 2} (-2, -1, 0, 1, 2) and the half-integer cases.
Matrix elementwise_pow(const Matrix& values, double exponent);

}  // namespace betafact
