// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_SEBO_HPP
#define PIXEL_RSMA_SEBO_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "pixel_rsma/antenna_coder.hpp"
#include "pixel_rsma/errors.hpp"
#include "pixel_rsma/rng.hpp"

namespace pixel_rsma {

/// Successive exhaustive Boolean optimization parameters. Search complexity
/// is O(I 2^J) objective evaluations per restart.
struct SeboConfig {
  Index block_size = 8;       // J: bits swept exhaustively per block
  Index iterations = 5;       // I
  Index flips_per_kick = -1;  // bits flipped per kick; -1 means block_size
  Index restarts = 2;
  std::uint64_t seed = 0;

  Index effective_flips() const {
    return flips_per_kick < 0 ? block_size : flips_per_kick;
  }

  void validate(Index switches) const {
    if (block_size < 1 || block_size > std::min<Index>(switches, 16))
      throw InvalidArgument("SEBO block size must lie in [1, min(Q, 16)]");
    if (iterations < 1) throw InvalidArgument("SEBO needs >= 1 iteration");
    if (effective_flips() > block_size)
      throw InvalidArgument("SEBO kick size must lie in [0, J]");
    if (restarts < 1) throw InvalidArgument("SEBO needs >= 1 restart");
  }
};

template <typename Objective>
struct SeboResult {
  AntennaCoder coder;
  double value = 0.0;
};

namespace detail {

/// Sets each block in index order to its exhaustively best assignment given
/// the rest. Assignments enumerate in lexicographic order and a strict
/// improvement rule keeps the first maximizer, so ties go to the
/// lexicographically smallest coder.
template <typename Objective>
double sebo_sweep(Objective& objective, AntennaCoder& coder, double value,
                  Index block_size) {
  const Index q = coder.size();
  for (Index start = 0; start < q; start += block_size) {
    const Index len = std::min(block_size, q - start);
    const std::uint64_t combos = std::uint64_t{1} << len;
    AntennaCoder best = coder;
    double best_value = value;
    AntennaCoder candidate = coder;
    for (std::uint64_t v = 0; v < combos; ++v) {
      for (Index t = 0; t < len; ++t)
        candidate.set(start + t, ((v >> (len - 1 - t)) & 1u) != 0);
      const double candidate_value = objective(candidate);
      if (candidate_value > best_value) {
        best_value = candidate_value;
        best = candidate;
      }
    }
    coder = best;
    value = best_value;
  }
  return value;
}

template <typename Rng>
void random_kick(AntennaCoder& coder, Index flips, Rng& rng) {
  const Index q = coder.size();
  std::vector<Index> positions(static_cast<std::size_t>(q));
  for (Index i = 0; i < q; ++i) positions[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < flips; ++i) {
    std::uniform_int_distribution<Index> pick(i, q - 1);
    std::swap(positions[static_cast<std::size_t>(i)],
              positions[static_cast<std::size_t>(pick(rng))]);
    coder.flip(positions[static_cast<std::size_t>(i)]);
  }
}

}  // namespace detail

/// Block-coordinate exhaustive search over binary coders with random-flip
/// kicks and restarts. Never returns a coder worse than the initialization:
/// restart 0 starts from it and sweeps only accept improvements. With
/// J = Q and a single iteration the sweep is a full exhaustive search.
template <typename Objective>
SeboResult<Objective> sebo_search(Objective&& objective, Index switches,
                                  const SeboConfig& cfg, const AntennaCoder& init) {
  cfg.validate(switches);
  if (init.size() != switches)
    throw DimensionMismatch("initial coder length must equal switch count");

  auto rng = make_rng(cfg.seed, StreamKind::sebo, {});
  AntennaCoder best = init;
  double best_value = objective(best);

  for (Index restart = 0; restart < cfg.restarts; ++restart) {
    AntennaCoder current =
        restart == 0 ? init : AntennaCoder::random(switches, rng);
    double current_value = objective(current);
    for (Index iteration = 0; iteration < cfg.iterations; ++iteration) {
      current_value =
          detail::sebo_sweep(objective, current, current_value, cfg.block_size);
      if (cfg.effective_flips() > 0) {
        AntennaCoder kicked = current;
        detail::random_kick(kicked, std::min(cfg.effective_flips(), switches), rng);
        double kicked_value = objective(kicked);
        kicked_value =
            detail::sebo_sweep(objective, kicked, kicked_value, cfg.block_size);
        if (kicked_value > current_value) {
          current = kicked;
          current_value = kicked_value;
        }
      }
    }
    if (current_value > best_value) {
      best = current;
      best_value = current_value;
    }
  }
  return {best, best_value};
}

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_SEBO_HPP
