#pragma once

#include "betafact/models.hpp"
#include "betafact/types.hpp"

#include <vector>

namespace betafact {

struct SolverConfig {
  double epsilon = 1e-4;      // relative-decrease stopping threshold
  int max_iter = 10000;
  bool use_xi_exponent = false;   // strict-MM exponent 1/(3-beta) on the B block
  bool fix_factors = false;       // skip the M block entirely (convex setting)
  bool update_variability = true; // allow disabling the B block (reduces SLMM to LMM)
  bool validate_iterates = false; // run check_constraints on every iterate
  bool track_block_objectives = false;  // record J after every block update
  bool quiet = false;
};

enum class Termination { Converged, MaxIter };

struct BlockObjective {
  int iteration;
  char block;        // 'B', 'M' or 'A'
  double objective;
};

struct FitResult {
  Factorization theta;
  std::vector<double> objective_trace;   // length = iterations + 1
  int iterations = 0;
  Termination termination = Termination::MaxIter;
  int monotonicity_violations = 0;       // relative increases beyond 1e-9
  std::vector<BlockObjective> block_trace;  // filled when tracked
};

/// Multiplicative factor update (all models). The current model X is
/// rebuilt from the given state, clamped at kModelFloor, and each entry of
/// M is rescaled by [sum_n a_kn y x^(b-2) / sum_n a_kn x^(b-1)]^gamma(b)
/// with gamma = 1 on [1,2], 1/(2-b) below, 1/(b-1) above. A pinned first
/// column is left untouched.
FactorSet update_factors(const DataMatrix& data, const FactorSet& current,
                         const ProportionMatrix& proportions,
                         const std::optional<VariabilitySet>& variability, Beta beta);

/// Simplex-constrained proportion update via the change of variable
/// a_kn = u_kn / sum_k u_kn; the multiplicative ratio on u uses the
/// two-case gradient split (the first factor carries the per-voxel offset
/// m_l1 + w_ln when a variability perturbation W = V*B is present).
/// Columns are renormalized to sum exactly to one afterwards.
/// Throws NumericalError if a column of u collapses to zero.
ProportionMatrix update_proportions_simplex(const DataMatrix& data,
                                            const FactorSet& factors,
                                            const ProportionMatrix& current,
                                            const Matrix* perturbation, Beta beta);

/// Unconstrained nonnegative proportion update (plain beta-NMF), with the
/// same gamma(beta) exponent rule as the factor update.
ProportionMatrix update_proportions_nmf(const DataMatrix& data,
                                        const FactorSet& factors,
                                        const ProportionMatrix& current, Beta beta);

/// Variability coefficient update with the tangent-inequality majorization
/// of the l2,1 penalty. Numerator and denominator data sums are clamped at
/// zero (the basis may carry negative entries); column norms of the current
/// B are floored at 1e-12 in the penalty term. The exponent 1/(3-beta) is
/// applied only when use_xi_exponent is set and beta lies in [1, 2].
VariabilitySet update_variability(const DataMatrix& data, const FactorSet& factors,
                                  const ProportionMatrix& proportions,
                                  const VariabilitySet& current, Beta beta,
                                  double lambda, bool use_xi_exponent);

/// Block-coordinate descent: per iteration B (SLMM), M, then A, rebuilding
/// the clamped model before each block. Stops when the relative objective
/// decrease falls below cfg.epsilon or after cfg.max_iter iterations.
FitResult fit(const DataMatrix& data, const ModelSpec& spec, const Factorization& init,
              const SolverConfig& cfg);

}  // namespace betafact
