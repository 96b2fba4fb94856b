#include "betafact/solver.hpp"

#include "betafact/divergence.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace betafact {

namespace {

constexpr double kDenominatorFloor = 1e-12;
constexpr double kNormFloor = 1e-12;
constexpr double kMonotonicityTolerance = 1e-9;

double gamma_exponent(double b) {
  if (b < 1.0) return 1.0 / (2.0 - b);
  if (b > 2.0) return 1.0 / (b - 1.0);
  return 1.0;
}

Matrix clamped_model(const FactorSet& factors, const ProportionMatrix& proportions,
                     const std::optional<VariabilitySet>& variability) {
  return evaluate_model(factors, proportions, variability).cwiseMax(kModelFloor);
}

void check_finite(const Matrix& m, int iteration, char block) {
  if (!m.allFinite())
    throw NumericalError("fit: non-finite entries after block '" +
                             std::string(1, block) + "' at iteration " +
                             std::to_string(iteration),
                         iteration, block);
}

}  // namespace

FactorSet update_factors(const DataMatrix& data, const FactorSet& current,
                         const ProportionMatrix& proportions,
                         const std::optional<VariabilitySet>& variability, Beta beta) {
  const Matrix x = clamped_model(current, proportions, variability);
  const double b = beta.value;
  const Matrix weighted = data.values.array() * elementwise_pow(x, b - 2.0).array();
  const Matrix numerator = weighted * proportions.weights.transpose();
  const Matrix denominator = elementwise_pow(x, b - 1.0) * proportions.weights.transpose();

  Matrix ratio = numerator.array() / denominator.array().max(kDenominatorFloor);
  const double g = gamma_exponent(b);
  if (g != 1.0) ratio = elementwise_pow(ratio, g);

  FactorSet updated = current;
  updated.tacs = current.tacs.array() * ratio.array();
  if (current.sbf_pinned) updated.tacs.col(0) = current.tacs.col(0);
  return updated;
}

ProportionMatrix update_proportions_simplex(const DataMatrix& data,
                                            const FactorSet& factors,
                                            const ProportionMatrix& current,
                                            const Matrix* perturbation, Beta beta) {
  const auto& tacs = factors.tacs;
  const auto& weights = current.weights;
  Matrix x = tacs * weights;
  if (perturbation)
    x.array() += perturbation->array().rowwise() * weights.row(0).array();
  x = x.cwiseMax(kModelFloor);

  const double b = beta.value;
  const Matrix p2 = data.values.array() * elementwise_pow(x, b - 2.0).array();
  const Matrix p1 = elementwise_pow(x, b - 1.0);
  const RowVector model_power_sums = elementwise_pow(x, b).colwise().sum();
  const RowVector data_power_sums = (data.values.array() * p1.array()).colwise().sum();

  Matrix numerator = tacs.transpose() * p2;
  Matrix denominator = tacs.transpose() * p1;
  numerator.array().rowwise() += model_power_sums.array();
  denominator.array().rowwise() += data_power_sums.array();
  if (perturbation) {
    numerator.row(0) += (perturbation->array() * p2.array()).colwise().sum().matrix();
    denominator.row(0) += (perturbation->array() * p1.array()).colwise().sum().matrix();
  }

  Matrix u = weights.array() * numerator.array() /
             denominator.array().max(kDenominatorFloor);
  ProportionMatrix updated;
  updated.weights.resize(u.rows(), u.cols());
  for (Index n = 0; n < u.cols(); ++n) {
    const double total = u.col(n).sum();
    if (!(total > 0.0))
      throw NumericalError("update_proportions_simplex: column collapsed to zero "
                           "at voxel " + std::to_string(n), 0, 'A');
    updated.weights.col(n) = u.col(n) / total;
  }
  return updated;
}

ProportionMatrix update_proportions_nmf(const DataMatrix& data,
                                        const FactorSet& factors,
                                        const ProportionMatrix& current, Beta beta) {
  const Matrix x = (factors.tacs * current.weights).cwiseMax(kModelFloor);
  const double b = beta.value;
  const Matrix weighted = data.values.array() * elementwise_pow(x, b - 2.0).array();
  const Matrix numerator = factors.tacs.transpose() * weighted;
  const Matrix denominator = factors.tacs.transpose() * elementwise_pow(x, b - 1.0);

  Matrix ratio = numerator.array() / denominator.array().max(kDenominatorFloor);
  const double g = gamma_exponent(b);
  if (g != 1.0) ratio = elementwise_pow(ratio, g);
  return {current.weights.array() * ratio.array()};
}

VariabilitySet update_variability(const DataMatrix& data, const FactorSet& factors,
                                  const ProportionMatrix& proportions,
                                  const VariabilitySet& current, Beta beta,
                                  double lambda, bool use_xi_exponent) {
  const Matrix x = clamped_model(factors, proportions, current);
  const double b = beta.value;
  const Matrix p2 = data.values.array() * elementwise_pow(x, b - 2.0).array();
  const Matrix p1 = elementwise_pow(x, b - 1.0);
  const RowVector sbf_weights = proportions.weights.row(0);

  // Data-fit sums, scaled by a_1n and clamped at zero entry-wise: the basis
  // may carry negative entries while the gradient split assumes nonnegative
  // parts.
  Matrix numerator = ((current.basis.transpose() * p2).array().rowwise() *
                      sbf_weights.array()).max(0.0);
  Matrix denominator = ((current.basis.transpose() * p1).array().rowwise() *
                        sbf_weights.array()).max(0.0);
  if (lambda != 0.0) {
    const RowVector norms = current.coefficients.colwise().norm().cwiseMax(kNormFloor);
    denominator.array() +=
        lambda * (current.coefficients.array().rowwise() / norms.array());
  }

  Matrix ratio = numerator.array() / denominator.array().max(kDenominatorFloor);
  if (use_xi_exponent && b >= 1.0 && b <= 2.0) {
    const double xi = 1.0 / (3.0 - b);
    if (xi != 1.0) ratio = elementwise_pow(ratio, xi);
  }

  VariabilitySet updated = current;
  updated.coefficients = current.coefficients.array() * ratio.array();
  return updated;
}

FitResult fit(const DataMatrix& data, const ModelSpec& spec, const Factorization& init,
              const SolverConfig& cfg) {
  if (!(cfg.epsilon > 0.0))
    throw std::invalid_argument("fit: epsilon must be positive");
  if (cfg.max_iter < 1)
    throw std::invalid_argument("fit: max_iter must be at least 1");
  if (spec.kind != ModelKind::Slmm && spec.lambda != 0.0)
    throw std::invalid_argument("fit: lambda requires the SLMM model");
  if ((spec.kind == ModelKind::Slmm) != init.variability.has_value())
    throw std::invalid_argument("fit: variability block present iff model is SLMM");
  if (data.values.size() == 0)
    throw std::invalid_argument("fit: empty data matrix");
  if (data.values.minCoeff() < 0.0)
    throw std::invalid_argument("fit: data entries must be nonnegative");
  if (spec.beta.value <= 0.0 && data.values.minCoeff() == 0.0)
    throw std::domain_error(
        "fit: data contains zeros, outside the domain for beta <= 0; "
        "clamp them first (--floor-data)");
  if (const auto violations = check_constraints(spec, init); !violations.empty())
    throw std::invalid_argument("fit: initial state violates constraints: " +
                                violations.front().describe());
  if (!cfg.quiet && spec.kind != ModelKind::Nmf &&
      (spec.beta.value < 1.0 || spec.beta.value > 2.0))
    std::cerr << "fit: beta = " << spec.beta.value
              << " outside [1, 2]; proportion/variability updates fall back to "
                 "exponent-1 heuristics\n";

  const bool simplex = spec.kind != ModelKind::Nmf;
  const bool has_b_block =
      spec.kind == ModelKind::Slmm && cfg.update_variability;

  FitResult result;
  result.theta = init;
  Factorization& state = result.theta;

  double current_objective = objective(data, spec, state);
  if (!std::isfinite(current_objective))
    throw NumericalError("fit: initial objective is not finite", 0, '-');
  result.objective_trace.push_back(current_objective);

  // Reference objective for monotonicity accounting at the finest recorded
  // granularity (per block when tracked, per iteration otherwise).
  double reference_objective = current_objective;
  const auto record_block = [&](int iteration, char block) {
    if (!cfg.track_block_objectives) return;
    const double j = objective(data, spec, state);
    result.block_trace.push_back({iteration, block, j});
    if (j > reference_objective * (1.0 + kMonotonicityTolerance))
      ++result.monotonicity_violations;
    reference_objective = j;
  };

  // Precomputed zero perturbation keeps LMM and B-frozen SLMM on the same
  // arithmetic path.
  Matrix perturbation;

  for (int iteration = 1; iteration <= cfg.max_iter; ++iteration) {
    if (has_b_block) {
      state.variability = update_variability(data, state.factors, state.proportions,
                                             *state.variability, spec.beta,
                                             spec.lambda, cfg.use_xi_exponent);
      check_finite(state.variability->coefficients, iteration, 'B');
      record_block(iteration, 'B');
    }

    if (!cfg.fix_factors) {
      state.factors = update_factors(data, state.factors, state.proportions,
                                     state.variability, spec.beta);
      check_finite(state.factors.tacs, iteration, 'M');
      record_block(iteration, 'M');
    }

    if (simplex) {
      const Matrix* offset = nullptr;
      if (state.variability) {
        perturbation = state.variability->basis * state.variability->coefficients;
        offset = &perturbation;
      }
      state.proportions = update_proportions_simplex(data, state.factors,
                                                     state.proportions, offset,
                                                     spec.beta);
    } else {
      state.proportions =
          update_proportions_nmf(data, state.factors, state.proportions, spec.beta);
    }
    check_finite(state.proportions.weights, iteration, 'A');
    record_block(iteration, 'A');

    if (cfg.validate_iterates) {
      if (const auto violations = check_constraints(spec, state); !violations.empty())
        throw NumericalError("fit: iterate violates constraints at iteration " +
                                 std::to_string(iteration) + ": " +
                                 violations.front().describe(),
                             iteration, '-');
    }

    const double next_objective = objective(data, spec, state);
    if (!std::isfinite(next_objective))
      throw NumericalError("fit: objective not finite at iteration " +
                               std::to_string(iteration),
                           iteration, '-');
    result.objective_trace.push_back(next_objective);
    result.iterations = iteration;
    if (!cfg.track_block_objectives &&
        next_objective > current_objective * (1.0 + kMonotonicityTolerance))
      ++result.monotonicity_violations;

    // Paper stopping rule: (J_prev - J_cur) / J_prev < epsilon.
    const bool converged =
        current_objective == 0.0 ||
        (current_objective - next_objective) / current_objective < cfg.epsilon;
    current_objective = next_objective;
    if (converged) {
      result.termination = Termination::Converged;
      return result;
    }
  }
  result.termination = Termination::MaxIter;
  return result;
}

}  // namespace betafact
