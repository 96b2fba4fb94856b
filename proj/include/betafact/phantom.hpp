#pragma once

#include "betafact/types.hpp"

#include <cstdint>
#include <utility>

namespace betafact {

enum class NoiseKind { Gaussian, Poisson, Gamma };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Gaussian;
  // Gaussian: standard deviation sigma (0 = noiseless).
  // Poisson:  count scale s, Y = Poisson(s * X) / s.
  // Gamma:    shape alpha, Y = Gamma(alpha, X / alpha) (mean X).
  double param = 0.0;
};

struct PhantomSpec {
  Index frames = 20;
  Index voxels = 2500;
  int factors = 4;
  int variability_rank = 3;   // SLMM only
  ModelKind kind = ModelKind::Slmm;
  NoiseSpec noise;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  Factorization theta;
  Matrix image;             // noiseless X* = X(theta*)
  Vector frame_durations;   // minutes
};

/// Synthetic dynamic image with known latent variables.
///
/// Factor curves are peak-normalized gamma-variate shapes t^p exp(-t/tau)
/// on a 60-minute frame grid; proportions are Dirichlet draws with one
/// contiguous quarter of the voxel line forming a high-uptake block for
/// factor 1 (NMF additionally rescales columns so no sum-to-one holds);
/// SLMM adds a smooth signed basis V riding on the first factor curve and
/// coefficients B supported on the block only, split into four subregions
/// of increasing mean level. Noise is applied entry-wise per NoiseSpec;
/// Gaussian output is clamped at zero.
std::pair<DataMatrix, GroundTruth> generate(const PhantomSpec& spec);

/// Index range [first, last) of the high-uptake voxel block.
std::pair<Index, Index> high_uptake_block(Index voxels);

}  // namespace betafact
