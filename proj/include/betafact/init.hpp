#pragma once

#include "betafact/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace betafact {

enum class InitMethod { KMeans, Random, FromFile };

struct InitSpec {
  InitMethod method = InitMethod::KMeans;
  std::uint64_t seed = 0;
  int kmeans_iters = 100;
  std::string path;   // FromFile only
};

struct KMeansResult {
  Matrix centroids;          // L x K
  std::vector<int> labels;   // length N
  int iterations = 0;
};

/// Lloyd's algorithm on the columns of `points` with squared-Euclidean
/// assignment and k-means++ seeding driven by `seed`. An emptied cluster is
/// re-seeded to the point farthest from its assigned centroid. Stops when no
/// centroid moves more than `tolerance` or after `max_iters` rounds.
KMeansResult kmeans_columns(const Matrix& points, int k, std::uint64_t seed,
                            int max_iters = 100, double tolerance = 1e-9);

/// Factor curves initialized as the K cluster centroids of the voxel TACs.
FactorSet init_factors_kmeans(const DataMatrix& data, int k, const InitSpec& spec);

/// i.i.d. uniform(0,1) proportions; columns renormalized to sum one when
/// `stochastic` is set.
ProportionMatrix init_proportions_random(int k, Index voxels, std::uint64_t seed,
                                         bool stochastic);

/// Proportions from clustering labels: one-hot columns mixed with a uniform
/// floor so no entry is exactly zero (multiplicative updates cannot revive
/// zeros).
ProportionMatrix init_proportions_from_labels(const std::vector<int>& labels, int k,
                                              double smoothing = 0.05);

/// i.i.d. uniform(0, scale) variability coefficients.
Matrix init_internal_random(int rank, Index voxels, std::uint64_t seed, double scale);

}  // namespace betafact
