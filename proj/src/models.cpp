#include "betafact/models.hpp"

#include "betafact/divergence.hpp"

#include <stdexcept>
#include <string>

namespace betafact {

namespace {

void check_model_shapes(const FactorSet& factors, const ProportionMatrix& proportions,
                        const std::optional<VariabilitySet>& variability) {
  const Index frames = factors.tacs.rows();
  const Index k = factors.tacs.cols();
  if (k < 1) throw std::invalid_argument("evaluate_model: need at least one factor");
  if (proportions.weights.rows() != k)
    throw std::invalid_argument("evaluate_model: proportion rows (" +
                                std::to_string(proportions.weights.rows()) +
                                ") do not match factor count (" + std::to_string(k) + ")");
  if (variability) {
    if (variability->basis.rows() != frames)
      throw std::invalid_argument("evaluate_model: variability basis frame count mismatch");
    if (variability->coefficients.rows() != variability->basis.cols())
      throw std::invalid_argument("evaluate_model: variability coefficient rows must match basis rank");
    if (variability->coefficients.cols() != proportions.weights.cols())
      throw std::invalid_argument("evaluate_model: variability coefficient voxel count mismatch");
  }
}

}  // namespace

Matrix evaluate_model(const FactorSet& factors, const ProportionMatrix& proportions,
                      const std::optional<VariabilitySet>& variability) {
  check_model_shapes(factors, proportions, variability);
  Matrix x = factors.tacs * proportions.weights;
  if (variability) {
    const Matrix perturbation = variability->basis * variability->coefficients;
    x.array() += perturbation.array().rowwise() * proportions.weights.row(0).array();
  }
  return x;
}

Matrix evaluate_model(const Factorization& state) {
  return evaluate_model(state.factors, state.proportions, state.variability);
}

double l21_norm(const Matrix& coefficients) {
  double total = 0.0;
  for (Index n = 0; n < coefficients.cols(); ++n)
    total += coefficients.col(n).norm();
  return total;
}

double objective(const DataMatrix& data, const ModelSpec& spec,
                 const Factorization& state) {
  if ((spec.kind == ModelKind::Slmm) != state.variability.has_value())
    throw std::invalid_argument("objective: variability block present iff model is SLMM");
  const Matrix x = evaluate_model(state).cwiseMax(kModelFloor);
  double j = beta_divergence(data.values, x, spec.beta);
  if (spec.kind == ModelKind::Slmm && spec.lambda != 0.0)
    j += spec.lambda * l21_norm(state.variability->coefficients);
  return j;
}

std::string ConstraintViolation::describe() const {
  switch (kind) {
    case Kind::NegativeFactor:
      return "factor entry (" + std::to_string(row) + "," + std::to_string(col) +
             ") negative by " + std::to_string(magnitude);
    case Kind::NegativeProportion:
      return "proportion entry (" + std::to_string(row) + "," + std::to_string(col) +
             ") negative by " + std::to_string(magnitude);
    case Kind::NegativeCoefficient:
      return "variability coefficient (" + std::to_string(row) + "," +
             std::to_string(col) + ") negative by " + std::to_string(magnitude);
    case Kind::SumToOne:
      return "proportion column " + std::to_string(col) + " sums off one by " +
             std::to_string(magnitude);
  }
  return "unknown violation";
}

std::vector<ConstraintViolation> check_constraints(const ModelSpec& spec,
                                                   const Factorization& state,
                                                   double sum_tolerance) {
  if ((spec.kind == ModelKind::Slmm) != state.variability.has_value())
    throw std::invalid_argument("check_constraints: variability block present iff model is SLMM");
  check_model_shapes(state.factors, state.proportions, state.variability);

  std::vector<ConstraintViolation> violations;
  const auto scan_negative = [&](const Matrix& m, ConstraintViolation::Kind kind) {
    for (Index c = 0; c < m.cols(); ++c)
      for (Index r = 0; r < m.rows(); ++r)
        if (m(r, c) < 0.0)
          violations.push_back({kind, r, c, -m(r, c)});
  };

  scan_negative(state.factors.tacs, ConstraintViolation::Kind::NegativeFactor);
  scan_negative(state.proportions.weights, ConstraintViolation::Kind::NegativeProportion);
  if (state.variability)
    scan_negative(state.variability->coefficients,
                  ConstraintViolation::Kind::NegativeCoefficient);

  if (spec.kind != ModelKind::Nmf) {
    for (Index n = 0; n < state.proportions.weights.cols(); ++n) {
      const double deviation = std::abs(state.proportions.weights.col(n).sum() - 1.0);
      if (deviation > sum_tolerance)
        violations.push_back({ConstraintViolation::Kind::SumToOne, -1, n, deviation});
    }
  }
  return violations;
}

}  // namespace betafact
