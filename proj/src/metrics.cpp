#include "betafact/metrics.hpp"

#include "betafact/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace betafact {

namespace {

void check_same_shape(const Matrix& a, const Matrix& b, const char* who) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument(std::string(who) + ": shape mismatch");
}

Matrix peak_normalized_columns(const Matrix& m) {
  Matrix out = m;
  for (Index c = 0; c < out.cols(); ++c) {
    const double peak = out.col(c).cwiseAbs().maxCoeff();
    if (peak > 0.0) out.col(c) /= peak;
  }
  return out;
}

double permutation_cost(const Matrix& estimated, const Matrix& reference,
                        const std::vector<Index>& perm) {
  double cost = 0.0;
  for (Index k = 0; k < reference.cols(); ++k)
    cost += (estimated.col(perm[k]) - reference.col(k)).squaredNorm();
  return cost;
}

double nmse_or_nan(const Matrix& estimate, const Matrix& truth) {
  if (truth.size() == 0 || truth.squaredNorm() == 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  return nmse(estimate, truth);
}

}  // namespace

double psnr(const Matrix& estimate, const Matrix& truth) {
  check_same_shape(estimate, truth, "psnr");
  const double peak = truth.maxCoeff();
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: reference image has no positive peak");
  const double error = (estimate - truth).squaredNorm();
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / error);
}

double nmse(const Matrix& estimate, const Matrix& truth) {
  check_same_shape(estimate, truth, "nmse");
  const double reference = truth.squaredNorm();
  if (reference == 0.0) throw std::domain_error("nmse: reference is identically zero");
  return (estimate - truth).squaredNorm() / reference;
}

std::vector<Index> align_factors(const Matrix& estimated, const Matrix& reference,
                                 bool pin_first) {
  if (estimated.cols() != reference.cols() || estimated.rows() != reference.rows())
    throw std::invalid_argument("align_factors: shape mismatch");
  const Index k = reference.cols();
  const Matrix e = peak_normalized_columns(estimated);
  const Matrix r = peak_normalized_columns(reference);

  std::vector<Index> best(k);
  std::iota(best.begin(), best.end(), 0);
  const Index first_free = pin_first ? 1 : 0;
  const Index free_count = k - first_free;

  if (free_count <= 8) {
    std::vector<Index> perm = best;
    double best_cost = permutation_cost(e, r, best);
    std::sort(perm.begin() + first_free, perm.end());
    do {
      const double cost = permutation_cost(e, r, perm);
      if (cost < best_cost) {
        best_cost = cost;
        best = perm;
      }
    } while (std::next_permutation(perm.begin() + first_free, perm.end()));
    return best;
  }

  // Greedy nearest-column fallback for large K.
  std::vector<bool> used(k, false);
  for (Index i = 0; i < first_free; ++i) used[i] = true;
  for (Index kk = first_free; kk < k; ++kk) {
    double best_cost = std::numeric_limits<double>::infinity();
    Index pick = 0;
    for (Index j = first_free; j < k; ++j) {
      if (used[j]) continue;
      const double cost = (e.col(j) - r.col(kk)).squaredNorm();
      if (cost < best_cost) {
        best_cost = cost;
        pick = j;
      }
    }
    best[kk] = pick;
    used[pick] = true;
  }
  return best;
}

MetricReport report(const FitResult& fit, const GroundTruth& truth) {
  const Matrix& m_hat = fit.theta.factors.tacs;
  const Matrix& m_star = truth.theta.factors.tacs;
  const Matrix& a_hat = fit.theta.proportions.weights;
  const Matrix& a_star = truth.theta.proportions.weights;
  const Index k = m_star.cols();
  const bool pin = fit.theta.factors.sbf_pinned;

  const std::vector<Index> perm = align_factors(m_hat, m_star, pin);
  Matrix m_aligned(m_hat.rows(), k);
  Matrix a_aligned(k, a_hat.cols());
  for (Index kk = 0; kk < k; ++kk) {
    m_aligned.col(kk) = m_hat.col(perm[kk]);
    a_aligned.row(kk) = a_hat.row(perm[kk]);
  }

  MetricReport out;
  out.psnr = psnr(evaluate_model(fit.theta), truth.image);
  out.nmse_a1 = nmse(a_aligned.row(0), a_star.row(0));
  out.nmse_m1 = nmse(m_aligned.col(0), m_star.col(0));
  if (k > 1) {
    out.nmse_a2k = nmse(a_aligned.bottomRows(k - 1), a_star.bottomRows(k - 1));
    out.nmse_m2k = nmse(m_aligned.rightCols(k - 1), m_star.rightCols(k - 1));
  } else {
    out.nmse_a2k = std::numeric_limits<double>::quiet_NaN();
    out.nmse_m2k = std::numeric_limits<double>::quiet_NaN();
  }

  if (truth.theta.variability) {
    const Matrix& b_star = truth.theta.variability->coefficients;
    const Matrix scaled_star =
        b_star.array().rowwise() * a_star.row(0).array();
    Matrix scaled_hat = Matrix::Zero(b_star.rows(), b_star.cols());
    if (fit.theta.variability)
      scaled_hat = fit.theta.variability->coefficients.array().rowwise() *
                   a_aligned.row(0).array();
    out.nmse_a1b = nmse_or_nan(scaled_hat, scaled_star);
  } else {
    out.nmse_a1b = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace betafact
