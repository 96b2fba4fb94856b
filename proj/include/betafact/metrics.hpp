#pragma once

#include "betafact/phantom.hpp"
#include "betafact/solver.hpp"
#include "betafact/types.hpp"

#include <vector>

namespace betafact {

/// 10 log10(max(X*)^2 / ||Xhat - X*||_F^2) in dB; +infinity on an exact match.
double psnr(const Matrix& estimate, const Matrix& truth);

/// ||est - truth||_F^2 / ||truth||_F^2. Throws std::domain_error when the
/// reference is identically zero.
double nmse(const Matrix& estimate, const Matrix& truth);

/// Match estimated factor columns to reference columns by minimal total
/// squared distance between peak-normalized columns (exhaustive for up to 8
/// free factors, greedy beyond). Returns p with p[k] = estimated column
/// matched to reference factor k. With pin_first the first factor stays put.
std::vector<Index> align_factors(const Matrix& estimated, const Matrix& reference,
                                 bool pin_first);

struct MetricReport {
  double psnr = 0.0;
  double nmse_a1 = 0.0;     // SBF proportion row
  double nmse_a2k = 0.0;    // remaining proportion rows (NaN when K = 1)
  double nmse_m1 = 0.0;     // nominal SBF curve
  double nmse_m2k = 0.0;    // remaining factor curves (NaN when K = 1)
  double nmse_a1b = 0.0;    // per-voxel variability A1 . B (NaN without truth B)
};

/// Factor-aligned evaluation of a fit against ground truth. A missing
/// estimated B counts as zero (so nmse_a1b = 1 against any nonzero truth).
MetricReport report(const FitResult& fit, const GroundTruth& truth);

}  // namespace betafact
