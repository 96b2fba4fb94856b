#pragma once

#include "betafact/types.hpp"

#include <string>
#include <vector>

namespace betafact {

/// X(theta): M*A for NMF/LMM; M*A + [broadcast(A_1) . V*B] for SLMM,
/// where the bracket is the Hadamard product of V*B with the first row of A
/// broadcast over frames.
Matrix evaluate_model(const FactorSet& factors, const ProportionMatrix& proportions,
                      const std::optional<VariabilitySet>& variability);
Matrix evaluate_model(const Factorization& state);

/// Sum over columns of the column-wise Euclidean norms.
double l21_norm(const Matrix& coefficients);

/// Penalized objective J(theta) = D_beta(Y | X(theta)) + lambda * ||B||_{2,1}.
/// The model is clamped at kModelFloor before the divergence; the penalty
/// term is present only for SLMM.
double objective(const DataMatrix& data, const ModelSpec& spec,
                 const Factorization& state);

struct ConstraintViolation {
  enum class Kind { NegativeFactor, NegativeProportion, NegativeCoefficient, SumToOne };
  Kind kind;
  Index row;        // (l,k) for factors, (k,n) for proportions, (i,n) for B; (-1,n) for sums
  Index col;
  double magnitude;

  std::string describe() const;
};

/// Value-level checks of the constraint set of spec.kind: nonnegativity of
/// M, A (and B for SLMM), and column sums of A within sum_tolerance of 1
/// under LMM/SLMM. Structural problems (missing/mismatched blocks) throw.
std::vector<ConstraintViolation> check_constraints(const ModelSpec& spec,
                                                   const Factorization& state,
                                                   double sum_tolerance = 1e-9);

}  // namespace betafact
