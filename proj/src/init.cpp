#include "betafact/init.hpp"

#include "betafact/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace betafact {

namespace {

// Squared distance from each column of points to the given centroid column.
Vector squared_distances(const Matrix& points, const Vector& centroid) {
  return (points.colwise() - centroid).colwise().squaredNorm().transpose();
}

Matrix seed_centroids(const Matrix& points, int k, Rng& rng) {
  const Index n = points.cols();
  Matrix centroids(points.rows(), k);
  centroids.col(0) = points.col(static_cast<Index>(rng.uniform_index(n)));
  Vector nearest = squared_distances(points, centroids.col(0));
  for (int c = 1; c < k; ++c) {
    const double total = nearest.sum();
    Index pick;
    if (total > 0.0) {
      // D^2 sampling: walk the cumulative weights.
      const double target = rng.uniform(total);
      double cumulative = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        cumulative += nearest(i);
        if (cumulative > target) {
          pick = i;
          break;
        }
      }
    } else {
      // All points coincide with existing centroids.
      pick = static_cast<Index>(rng.uniform_index(n));
    }
    centroids.col(c) = points.col(pick);
    nearest = nearest.cwiseMin(squared_distances(points, centroids.col(c)));
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans_columns(const Matrix& points, int k, std::uint64_t seed,
                            int max_iters, double tolerance) {
  const Index n = points.cols();
  if (k < 1) throw std::invalid_argument("kmeans: need k >= 1");
  if (static_cast<Index>(k) > n)
    throw std::invalid_argument("kmeans: more clusters (" + std::to_string(k) +
                                ") than points (" + std::to_string(n) + ")");
  if (max_iters < 1) throw std::invalid_argument("kmeans: need at least one iteration");

  Rng rng(seed);
  KMeansResult result;
  result.centroids = seed_centroids(points, k, rng);
  result.labels.assign(n, 0);

  for (int iter = 0; iter < max_iters; ++iter) {
    result.iterations = iter + 1;
    // Assignment; ties go to the lowest cluster index.
    for (Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int best_cluster = 0;
      for (int c = 0; c < k; ++c) {
        const double d = (points.col(i) - result.centroids.col(c)).squaredNorm();
        if (d < best) {
          best = d;
          best_cluster = c;
        }
      }
      result.labels[i] = best_cluster;
    }

    Matrix sums = Matrix::Zero(points.rows(), k);
    std::vector<Index> counts(k, 0);
    for (Index i = 0; i < n; ++i) {
      sums.col(result.labels[i]) += points.col(i);
      ++counts[result.labels[i]];
    }

    double max_movement = 0.0;
    for (int c = 0; c < k; ++c) {
      Vector updated;
      if (counts[c] > 0) {
        updated = sums.col(c) / static_cast<double>(counts[c]);
      } else {
        // Re-seed an emptied cluster to the point farthest from its
        // assigned centroid (lowest index on ties).
        Index farthest = 0;
        double farthest_distance = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double d =
              (points.col(i) - result.centroids.col(result.labels[i])).squaredNorm();
          if (d > farthest_distance) {
            farthest_distance = d;
            farthest = i;
          }
        }
        updated = points.col(farthest);
      }
      max_movement = std::max(max_movement, (updated - result.centroids.col(c)).norm());
      result.centroids.col(c) = updated;
    }
    if (max_movement <= tolerance) break;
  }

  // Final assignment consistent with the returned centroids.
  for (Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      const double d = (points.col(i) - result.centroids.col(c)).squaredNorm();
      if (d < best) {
        best = d;
        result.labels[i] = c;
      }
    }
  }
  return result;
}

FactorSet init_factors_kmeans(const DataMatrix& data, int k, const InitSpec& spec) {
  if (spec.kmeans_iters < 1)
    throw std::invalid_argument("init_factors_kmeans: kmeans_iters must be >= 1");
  const KMeansResult clusters =
      kmeans_columns(data.values, k, spec.seed, spec.kmeans_iters);
  return {clusters.centroids, false};
}

ProportionMatrix init_proportions_random(int k, Index voxels, std::uint64_t seed,
                                         bool stochastic) {
  Rng rng(seed);
  Matrix weights(k, voxels);
  for (Index n = 0; n < voxels; ++n)
    for (int r = 0; r < k; ++r)
      weights(r, n) = rng.uniform();
  if (stochastic)
    for (Index n = 0; n < voxels; ++n)
      weights.col(n) /= weights.col(n).sum();
  return {weights};
}

ProportionMatrix init_proportions_from_labels(const std::vector<int>& labels, int k,
                                              double smoothing) {
  Matrix weights =
      Matrix::Constant(k, static_cast<Index>(labels.size()), smoothing / k);
  for (std::size_t n = 0; n < labels.size(); ++n) {
    if (labels[n] < 0 || labels[n] >= k)
      throw std::invalid_argument("init_proportions_from_labels: label out of range");
    weights(labels[n], static_cast<Index>(n)) += 1.0 - smoothing;
  }
  return {weights};
}

Matrix init_internal_random(int rank, Index voxels, std::uint64_t seed, double scale) {
  if (!(scale > 0.0))
    throw std::invalid_argument("init_internal_random: scale must be positive");
  Rng rng(seed);
  Matrix coefficients(rank, voxels);
  for (Index n = 0; n < voxels; ++n)
    for (int i = 0; i < rank; ++i)
      coefficients(i, n) = rng.uniform(scale);
  return coefficients;
}

}  // namespace betafact
