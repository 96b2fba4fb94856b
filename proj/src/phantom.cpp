#include "betafact/phantom.hpp"

#include "betafact/models.hpp"
#include "betafact/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace betafact {

namespace {

// Substream ids for the master seed.
enum Stream : std::uint64_t { kCurves = 1, kProportions = 2, kVariability = 3, kNoise = 4 };

constexpr double kTotalMinutes = 60.0;
constexpr double kCoefficientCeiling = 0.3;   // of the peak-normalized SBF

// Frame durations ramping from 1 to 5 minutes, rescaled to the total span.
Vector make_durations(Index frames) {
  Vector durations(frames);
  for (Index l = 0; l < frames; ++l)
    durations(l) = frames > 1 ? 1.0 + 4.0 * static_cast<double>(l) /
                                          static_cast<double>(frames - 1)
                              : kTotalMinutes;
  durations *= kTotalMinutes / durations.sum();
  return durations;
}

Vector frame_midpoints(const Vector& durations) {
  Vector midpoints(durations.size());
  double elapsed = 0.0;
  for (Index l = 0; l < durations.size(); ++l) {
    midpoints(l) = elapsed + 0.5 * durations(l);
    elapsed += durations(l);
  }
  return midpoints;
}

// Distinct gamma-variate shapes: the first is a slow high-uptake curve, the
// second an early sharp blood-like peak, the rest spread between.
Matrix make_factor_curves(const Vector& midpoints, int k, Rng& rng) {
  static constexpr double base_power[] = {2.2, 1.0, 1.6, 0.8};
  static constexpr double base_tau[] = {9.0, 1.3, 4.5, 14.0};
  Matrix tacs(midpoints.size(), k);
  for (int c = 0; c < k; ++c) {
    const double jitter_p = 1.0 + 0.2 * (rng.uniform() - 0.5);
    const double jitter_tau = 1.0 + 0.2 * (rng.uniform() - 0.5);
    const double p = base_power[c % 4] * jitter_p * (1.0 + 0.15 * (c / 4));
    const double tau = base_tau[c % 4] * jitter_tau * (1.0 + 0.3 * (c / 4));
    for (Index l = 0; l < midpoints.size(); ++l)
      tacs(l, c) = std::pow(midpoints(l), p) * std::exp(-midpoints(l) / tau);
    tacs.col(c) /= tacs.col(c).maxCoeff();
  }
  return tacs;
}

Vector dirichlet(const Vector& alpha, Rng& rng) {
  Vector draw(alpha.size());
  for (Index i = 0; i < alpha.size(); ++i)
    draw(i) = rng.gamma(alpha(i), 1.0);
  const double total = draw.sum();
  if (total <= 0.0) {
    draw.setConstant(1.0 / static_cast<double>(alpha.size()));
    return draw;
  }
  return draw / total;
}

Matrix make_proportions(Index voxels, int k, ModelKind kind, Rng& rng) {
  const auto [block_first, block_last] = high_uptake_block(voxels);
  Vector inside = Vector::Ones(k);
  inside(0) = 8.0;
  Vector outside = Vector::Ones(k);
  outside(0) = 0.05;
  Matrix weights(k, voxels);
  for (Index n = 0; n < voxels; ++n) {
    const bool in_block = n >= block_first && n < block_last;
    weights.col(n) = dirichlet(in_block ? inside : outside, rng);
    if (kind == ModelKind::Nmf)
      weights.col(n) *= 0.6 + 0.8 * rng.uniform();   // break the simplex
  }
  return weights;
}

// Smooth signed modulations of the first factor curve; v_i = m1 .* g_i with
// g_i(t) = (0.6/i) sin(pi i t / T), so X* stays strictly positive for any
// B below the coefficient ceiling.
Matrix make_variability_basis(const Vector& midpoints, const Vector& sbf, int rank) {
  Matrix basis(midpoints.size(), rank);
  for (int i = 0; i < rank; ++i) {
    const double scale = 0.6 / static_cast<double>(i + 1);
    for (Index l = 0; l < midpoints.size(); ++l)
      basis(l, i) = sbf(l) * scale *
                    std::sin(std::numbers::pi * static_cast<double>(i + 1) *
                             midpoints(l) / kTotalMinutes);
  }
  return basis;
}

// Coefficients supported on the high-uptake block only; the block splits
// into four subregions with increasing mean variability level.
Matrix make_variability_coefficients(Index voxels, int rank, Rng& rng) {
  const auto [block_first, block_last] = high_uptake_block(voxels);
  Matrix coefficients = Matrix::Zero(rank, voxels);
  const Index block = block_last - block_first;
  for (Index n = block_first; n < block_last; ++n) {
    const Index subregion = std::min<Index>(4 * (n - block_first) / std::max<Index>(block, 1), 3);
    const double level = kCoefficientCeiling * 0.25 * static_cast<double>(subregion + 1);
    for (int i = 0; i < rank; ++i)
      coefficients(i, n) = rng.uniform(level);
  }
  return coefficients;
}

void apply_noise(Matrix& values, const NoiseSpec& noise, Rng& rng) {
  switch (noise.kind) {
    case NoiseKind::Gaussian:
      if (noise.param == 0.0) return;
      for (Index n = 0; n < values.cols(); ++n)
        for (Index l = 0; l < values.rows(); ++l)
          values(l, n) = std::max(0.0, values(l, n) + noise.param * rng.normal());
      return;
    case NoiseKind::Poisson:
      for (Index n = 0; n < values.cols(); ++n)
        for (Index l = 0; l < values.rows(); ++l)
          values(l, n) = static_cast<double>(rng.poisson(noise.param * values(l, n))) /
                         noise.param;
      return;
    case NoiseKind::Gamma:
      for (Index n = 0; n < values.cols(); ++n)
        for (Index l = 0; l < values.rows(); ++l)
          values(l, n) = values(l, n) > 0.0
                             ? rng.gamma(noise.param, values(l, n) / noise.param)
                             : 0.0;
      return;
  }
}

void validate(const PhantomSpec& spec) {
  if (spec.frames < 1 || spec.voxels < 1)
    throw std::invalid_argument("phantom: need at least one frame and one voxel");
  if (spec.factors < 1 || spec.factors > std::min(spec.frames, spec.voxels))
    throw std::invalid_argument("phantom: factor count must lie in [1, min(L, N)]");
  if (spec.kind == ModelKind::Slmm &&
      (spec.variability_rank < 1 || spec.variability_rank >= spec.frames))
    throw std::invalid_argument("phantom: variability rank must lie in [1, L)");
  const bool param_ok = spec.noise.kind == NoiseKind::Gaussian ? spec.noise.param >= 0.0
                                                               : spec.noise.param > 0.0;
  if (!param_ok) throw std::invalid_argument("phantom: invalid noise parameter");
}

}  // namespace

std::pair<Index, Index> high_uptake_block(Index voxels) {
  const Index first = voxels / 8;
  const Index length = std::max<Index>(voxels / 4, 1);
  return {first, std::min(first + length, voxels)};
}

std::pair<DataMatrix, GroundTruth> generate(const PhantomSpec& spec) {
  validate(spec);
  GroundTruth truth;
  truth.frame_durations = make_durations(spec.frames);
  const Vector midpoints = frame_midpoints(truth.frame_durations);

  Rng curve_rng(spec.seed, kCurves);
  truth.theta.factors = {make_factor_curves(midpoints, spec.factors, curve_rng),
                         spec.kind == ModelKind::Slmm};

  Rng proportion_rng(spec.seed, kProportions);
  truth.theta.proportions = {
      make_proportions(spec.voxels, spec.factors, spec.kind, proportion_rng)};

  if (spec.kind == ModelKind::Slmm) {
    Rng variability_rng(spec.seed, kVariability);
    VariabilitySet vb;
    vb.basis = make_variability_basis(midpoints, truth.theta.factors.tacs.col(0),
                                      spec.variability_rank);
    vb.coefficients =
        make_variability_coefficients(spec.voxels, spec.variability_rank, variability_rng);
    truth.theta.variability = std::move(vb);
  }

  truth.image = evaluate_model(truth.theta);

  DataMatrix data;
  data.values = truth.image;
  data.frame_durations = truth.frame_durations;
  Rng noise_rng(spec.seed, kNoise);
  apply_noise(data.values, spec.noise, noise_rng);
  return {std::move(data), std::move(truth)};
}

}  // namespace betafact
