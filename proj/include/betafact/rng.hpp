#pragma once

#include <cstdint>
#include <random>

namespace betafact {

/// SplitMix64 step; used to derive independent substream seeds from one
/// master seed.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derive the seed of substream `stream` from a master seed.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t stream);

/// Seeded random source with fixed, portable sampling algorithms.
///
/// The engine is std::mt19937_64 (fully specified by the standard). The
/// distributions are implemented here rather than taken from <random>
/// because the standard leaves their sequences implementation-defined:
///   uniform      (v >> 11 + 0.5) * 2^-53, open interval (0, 1)
///   normal       Box-Muller
///   gamma        Marsaglia-Tsang squeeze (alpha < 1 via the boost trick)
///   poisson      Knuth product for mean <= 10, Hormann PTRS above
struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}
  Rng(std::uint64_t master, std::uint64_t stream)
      : engine(substream_seed(master, stream)) {}

  std::uint64_t next_u64() { return engine(); }

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Uniform on (0, high).
  double uniform(double high) { return uniform() * high; }
  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  double normal();
  /// Gamma with given shape and scale (mean = shape * scale).
  double gamma(double shape, double scale);
  /// Poisson with the given mean.
  long long poisson(double mean);

  std::mt19937_64 engine;

 private:
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace betafact
