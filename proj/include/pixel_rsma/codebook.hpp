// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_CODEBOOK_HPP
#define PIXEL_RSMA_CODEBOOK_HPP

#include <cstdint>
#include <vector>

#include "pixel_rsma/rsma.hpp"
#include "pixel_rsma/sebo.hpp"

namespace pixel_rsma {

/// Common antenna-coder codebook shared by all users.
struct Codebook {
  std::vector<AntennaCoder> codewords;

  Index size() const { return static_cast<Index>(codewords.size()); }
  Index switches() const {
    return codewords.empty() ? 0 : codewords.front().size();
  }
  bool contains(const AntennaCoder& coder) const;
};

/// Offline training set: channel-estimate tuples, each carrying its own SAA
/// sample set.
using TrainingSet = std::vector<ChannelSampleSet>;

/// Shared evaluation context for codebook training and online selection.
struct RateContext {
  double total_power = 100.0;
  double noise_power = 1.0;
  StreamMode mode = StreamMode::rsma;
  Index grid_points = 101;
};

/// Sample-average sum-rate when every user adopts the same codeword; the
/// precoder is recomputed from the coded estimates with the mode's
/// closed-form method. Zero-pattern codewords score 0.
double codeword_sum_rate(const PixelReceiver& receiver, const AntennaCoder& codeword,
                         const ChannelSampleSet& tuple, const RateContext& ctx);

/// Assigns every tuple to the codeword maximizing its sum-rate; ties go to
/// the lowest codeword index. Returns M disjoint index sets covering the
/// training set.
std::vector<std::vector<Index>> lloyd_partition(const PixelReceiver& receiver,
                                                const Codebook& codebook,
                                                const TrainingSet& training,
                                                const RateContext& ctx);

/// Re-centers each nonempty cell by SEBO on the cell-averaged sum-rate,
/// initialized at the current centroid so the cell average never decreases.
/// Empty cells and duplicate centroids are reseeded with fresh random
/// distinct coders.
Codebook lloyd_centroid_update(const PixelReceiver& receiver,
                               const std::vector<std::vector<Index>>& partition,
                               const Codebook& current, const TrainingSet& training,
                               const SeboConfig& sebo_cfg, const RateContext& ctx,
                               std::uint64_t reseed_seed);

struct LloydResult {
  Codebook codebook;
  std::vector<double> trace;  // average sum-rate after init and each iteration
};

/// Lloyd-style max-rate codebook training: alternates partitioning and
/// centroid updates from a random initial codebook until the average
/// sum-rate's relative change drops below tol. The trace is non-decreasing
/// within 1e-8.
LloydResult lloyd_train(const PixelReceiver& receiver, const TrainingSet& training,
                        Index codebook_size, const SeboConfig& sebo_cfg,
                        const RateContext& ctx, double tol = 1e-3,
                        Index max_iters = 30, std::uint64_t seed = 0);

struct OnlineSelection {
  std::vector<AntennaCoder> coders;
  PrecoderMatrix precoders;
  RateReport report;
  std::vector<double> trace;        // objective after init and each update
  std::vector<Index> scan_counts;   // objective evaluations per user update
  Index passes = 0;
};

/// Online per-user codeword selection: sequential passes over users, each
/// scanning all M codewords with the precoder recomputed per candidate, until
/// the objective's relative change falls below 1e-4 or max_passes. Each user
/// update costs at most M objective evaluations, and the objective trace is
/// non-decreasing.
OnlineSelection online_select(const PixelReceiver& receiver,
                              const Codebook& codebook,
                              const ChannelSampleSet& estimate_tuple,
                              const RateContext& ctx, Index max_passes = 10,
                              std::uint64_t seed = 0);

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_CODEBOOK_HPP
