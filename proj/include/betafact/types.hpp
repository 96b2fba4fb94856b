#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>

namespace betafact {

using Matrix = Eigen::MatrixXd;      // column-major (voxel-major) storage
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

enum class ModelKind { Nmf, Lmm, Slmm };

/// Divergence parameter. Any finite real value is accepted; the special
/// values 2, 1 and 0 select the squared-Euclidean, Kullback-Leibler and
/// Itakura-Saito closed forms.
struct Beta {
  double value = 2.0;

  constexpr bool is_euclidean() const { return value == 2.0; }
  constexpr bool is_kl() const { return value == 1.0; }
  constexpr bool is_itakura_saito() const { return value == 0.0; }
};

/// Observed frames-by-voxels activity matrix. Entries are nonnegative;
/// frame durations (minutes) are carried as metadata only.
struct DataMatrix {
  Matrix values;                             // L x N
  std::optional<Vector> frame_durations;     // length L

  Index frames() const { return values.rows(); }
  Index voxels() const { return values.cols(); }
};

/// Elementary time-activity curves, one per column. When sbf_pinned is set
/// the first column is treated as a fixed nominal curve and is never
/// touched by the solver.
struct FactorSet {
  Matrix tacs;           // L x K, nonnegative
  bool sbf_pinned = false;

  Index count() const { return tacs.cols(); }
};

/// Per-voxel mixing coefficients; column-stochastic under LMM/SLMM.
struct ProportionMatrix {
  Matrix weights;        // K x N, nonnegative
};

/// Variability basis V (may carry negative entries) and its nonnegative
/// per-voxel coefficients B.
struct VariabilitySet {
  Matrix basis;          // L x N_v
  Matrix coefficients;   // N_v x N, nonnegative
};

struct ModelSpec {
  ModelKind kind = ModelKind::Lmm;
  Beta beta;
  double lambda = 0.0;   // column-sparsity weight, SLMM only
};

/// One complete state of the latent variables for any of the three models.
struct Factorization {
  FactorSet factors;
  ProportionMatrix proportions;
  std::optional<VariabilitySet> variability;   // present iff SLMM
};

/// Thrown when the solver encounters a non-finite objective; carries the
/// iteration and block where the blow-up was detected.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, int iteration, char block)
      : std::runtime_error(what), iteration(iteration), block(block) {}
  int iteration;
  char block;   // 'B', 'M', 'A', or '-' when outside a block
};

}  // namespace betafact
