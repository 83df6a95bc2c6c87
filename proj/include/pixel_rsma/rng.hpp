// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_RNG_HPP
#define PIXEL_RSMA_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include "pixel_rsma/types.hpp"

namespace pixel_rsma {

/// Labels for independent random substreams. Every stochastic quantity in the
/// pipeline is drawn from a stream addressed by (seed, kind, indices...), so
/// results are reproducible regardless of worker count or execution order.
enum class StreamKind : std::uint64_t {
  hardware = 1,
  virtual_scenario = 2,
  true_channel = 3,
  estimate_split = 4,
  saa_error = 5,
  codebook_init = 6,
  lloyd_reseed = 7,
  lloyd_centroid = 8,
  online_init = 9,
  sebo = 10,
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Collapses (seed, path...) into a single well-mixed 64-bit substream seed.
inline std::uint64_t substream_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = detail::splitmix64(seed);
  for (std::uint64_t p : path) h = detail::splitmix64(h ^ p);
  return h;
}

inline std::mt19937_64 make_rng(std::uint64_t seed,
                                std::initializer_list<std::uint64_t> path) {
  return std::mt19937_64(substream_seed(seed, path));
}

inline std::mt19937_64 make_rng(std::uint64_t seed, StreamKind kind,
                                std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = detail::splitmix64(seed);
  h = detail::splitmix64(h ^ static_cast<std::uint64_t>(kind));
  for (std::uint64_t p : path) h = detail::splitmix64(h ^ p);
  return std::mt19937_64(h);
}

/// Real Gaussian matrix, entries i.i.d. N(0, 1), filled in row-major order.
template <typename Rng>
MatrixXd randn_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd out(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out(i, j) = normal(rng);
  return out;
}

/// Complex Gaussian matrix, entries i.i.d. CN(0, var): real and imaginary
/// parts N(0, var/2), drawn real-then-imaginary in row-major order.
template <typename Rng>
MatrixXcd randcn_matrix(Index rows, Index cols, double var, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(var / 2.0));
  MatrixXcd out(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(i, j) = cxd(re, im);
    }
  return out;
}

template <typename Rng>
VectorXcd randcn_vector(Index n, double var, Rng& rng) {
  return randcn_matrix(n, 1, var, rng).col(0);
}

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_RNG_HPP
