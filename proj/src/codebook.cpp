// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "pixel_rsma/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "pixel_rsma/errors.hpp"
#include "pixel_rsma/rng.hpp"

namespace pixel_rsma {

bool Codebook::contains(const AntennaCoder& coder) const {
  return std::find(codewords.begin(), codewords.end(), coder) != codewords.end();
}

namespace {

/// Random coder distinct from every entry of `used`; falls back to a
/// lexicographic scan when random draws keep colliding (tiny Q).
AntennaCoder random_distinct_coder(Index switches,
                                   const std::vector<AntennaCoder>& used,
                                   std::mt19937_64& rng) {
  auto is_used = [&](const AntennaCoder& c) {
    return std::find(used.begin(), used.end(), c) != used.end();
  };
  for (int attempt = 0; attempt < 256; ++attempt) {
    AntennaCoder candidate = AntennaCoder::random(switches, rng);
    if (!is_used(candidate)) return candidate;
  }
  if (switches <= 20) {
    const std::uint64_t total = std::uint64_t{1} << switches;
    for (std::uint64_t v = 0; v < total; ++v) {
      AntennaCoder candidate = AntennaCoder::zeros(switches);
      for (Index t = 0; t < switches; ++t)
        candidate.set(t, ((v >> (switches - 1 - t)) & 1u) != 0);
      if (!is_used(candidate)) return candidate;
    }
  }
  throw InvalidArgument("codebook size exceeds the number of distinct coders");
}

MatrixXd rate_matrix(const PixelReceiver& receiver, const Codebook& codebook,
                     const TrainingSet& training, const RateContext& ctx) {
  const Index tuples = static_cast<Index>(training.size());
  const Index m = codebook.size();
  MatrixXd rates(tuples, m);
  for (Index d = 0; d < tuples; ++d)
    for (Index j = 0; j < m; ++j)
      rates(d, j) = codeword_sum_rate(
          receiver, codebook.codewords[static_cast<std::size_t>(j)],
          training[static_cast<std::size_t>(d)], ctx);
  return rates;
}

std::vector<std::vector<Index>> partition_from_rates(const MatrixXd& rates) {
  std::vector<std::vector<Index>> cells(static_cast<std::size_t>(rates.cols()));
  for (Index d = 0; d < rates.rows(); ++d) {
    Index best = 0;
    for (Index j = 1; j < rates.cols(); ++j)
      if (rates(d, j) > rates(d, best)) best = j;
    cells[static_cast<std::size_t>(best)].push_back(d);
  }
  return cells;
}

double average_best_rate(const MatrixXd& rates) {
  double total = 0.0;
  for (Index d = 0; d < rates.rows(); ++d) total += rates.row(d).maxCoeff();
  return total / static_cast<double>(rates.rows());
}

}  // namespace

double codeword_sum_rate(const PixelReceiver& receiver, const AntennaCoder& codeword,
                         const ChannelSampleSet& tuple, const RateContext& ctx) {
  const auto w = receiver.try_pattern_coder(codeword);
  if (!w) return 0.0;
  const Index users = tuple.users();
  std::vector<RowVectorXcd> estimate_rows(static_cast<std::size_t>(users));
  for (Index k = 0; k < users; ++k)
    estimate_rows[static_cast<std::size_t>(k)] =
        coded_channel_row(*w, tuple.estimates[static_cast<std::size_t>(k)]);
  const PrecoderMatrix precoders = scheme_precoder(
      estimate_rows, ctx.total_power, ctx.noise_power, ctx.mode, ctx.grid_points);

  CodedSamples coded;
  coded.estimate_rows = std::move(estimate_rows);
  coded.zero_pattern.assign(static_cast<std::size_t>(users), false);
  coded.sample_rows.resize(static_cast<std::size_t>(users));
  const Index s_count = tuple.samples();
  for (Index k = 0; k < users; ++k) {
    MatrixXcd rows(s_count, tuple.estimates[static_cast<std::size_t>(k)].cols());
    for (Index s = 0; s < s_count; ++s)
      rows.row(s) = coded_channel_row(
          *w, tuple.realizations[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)]);
    coded.sample_rows[static_cast<std::size_t>(k)] = std::move(rows);
  }
  return sample_average_rates(coded, precoders, ctx.noise_power).objective;
}

std::vector<std::vector<Index>> lloyd_partition(const PixelReceiver& receiver,
                                                const Codebook& codebook,
                                                const TrainingSet& training,
                                                const RateContext& ctx) {
  if (codebook.size() < 1) throw InvalidArgument("codebook must be nonempty");
  return partition_from_rates(rate_matrix(receiver, codebook, training, ctx));
}

Codebook lloyd_centroid_update(const PixelReceiver& receiver,
                               const std::vector<std::vector<Index>>& partition,
                               const Codebook& current, const TrainingSet& training,
                               const SeboConfig& sebo_cfg, const RateContext& ctx,
                               std::uint64_t reseed_seed) {
  if (static_cast<Index>(partition.size()) != current.size())
    throw DimensionMismatch("partition cell count must match codebook size");
  auto reseed_rng = make_rng(reseed_seed, StreamKind::lloyd_reseed, {});
  Codebook updated;
  updated.codewords.reserve(partition.size());
  for (std::size_t m = 0; m < partition.size(); ++m) {
    const std::vector<Index>& cell = partition[m];
    if (cell.empty()) {
      updated.codewords.push_back(random_distinct_coder(
          receiver.switch_count(), updated.codewords, reseed_rng));
      continue;
    }
    auto cell_average = [&](const AntennaCoder& candidate) -> double {
      double total = 0.0;
      for (Index d : cell)
        total += codeword_sum_rate(receiver, candidate,
                                   training[static_cast<std::size_t>(d)], ctx);
      return total / static_cast<double>(cell.size());
    };
    SeboConfig cfg_m = sebo_cfg;
    cfg_m.seed = substream_seed(
        reseed_seed, {static_cast<std::uint64_t>(StreamKind::lloyd_centroid),
                      static_cast<std::uint64_t>(m)});
    AntennaCoder centroid =
        sebo_search(cell_average, receiver.switch_count(), cfg_m,
                    current.codewords[m])
            .coder;
    // A centroid colliding with an earlier one would leave its cell empty at
    // the next partition (ties go to the lowest index), so reseed it now.
    if (std::find(updated.codewords.begin(), updated.codewords.end(), centroid) !=
        updated.codewords.end())
      centroid = random_distinct_coder(receiver.switch_count(), updated.codewords,
                                       reseed_rng);
    updated.codewords.push_back(std::move(centroid));
  }
  return updated;
}

LloydResult lloyd_train(const PixelReceiver& receiver, const TrainingSet& training,
                        Index codebook_size, const SeboConfig& sebo_cfg,
                        const RateContext& ctx, double tol, Index max_iters,
                        std::uint64_t seed) {
  if (codebook_size < 1) throw InvalidArgument("codebook size must be >= 1");
  if (training.empty()) throw InvalidArgument("training set must be nonempty");
  if (static_cast<Index>(training.size()) < codebook_size)
    std::cerr << "pixel-rsma: warning: training set smaller than codebook ("
              << training.size() << " < " << codebook_size << ")\n";

  auto init_rng = make_rng(seed, StreamKind::codebook_init, {});
  LloydResult result;
  result.codebook.codewords.reserve(static_cast<std::size_t>(codebook_size));
  for (Index m = 0; m < codebook_size; ++m)
    result.codebook.codewords.push_back(random_distinct_coder(
        receiver.switch_count(), result.codebook.codewords, init_rng));

  MatrixXd rates = rate_matrix(receiver, result.codebook, training, ctx);
  double average = average_best_rate(rates);
  result.trace.push_back(average);

  for (Index iteration = 1; iteration <= max_iters; ++iteration) {
    const auto cells = partition_from_rates(rates);
    const std::uint64_t iter_seed =
        substream_seed(seed, {static_cast<std::uint64_t>(StreamKind::lloyd_reseed),
                              static_cast<std::uint64_t>(iteration)});
    result.codebook = lloyd_centroid_update(receiver, cells, result.codebook,
                                            training, sebo_cfg, ctx, iter_seed);
    rates = rate_matrix(receiver, result.codebook, training, ctx);
    const double updated = average_best_rate(rates);
    result.trace.push_back(updated);
    if (updated - average <= tol * std::max(std::abs(average), 1e-12)) break;
    average = updated;
  }
  return result;
}

OnlineSelection online_select(const PixelReceiver& receiver,
                              const Codebook& codebook,
                              const ChannelSampleSet& estimate_tuple,
                              const RateContext& ctx, Index max_passes,
                              std::uint64_t seed) {
  const Index m = codebook.size();
  if (m < 1) throw InvalidArgument("codebook must be nonempty");
  const Index users = estimate_tuple.users();

  auto rng = make_rng(seed, StreamKind::online_init, {});
  std::uniform_int_distribution<Index> pick(0, m - 1);
  OnlineSelection sel;
  sel.coders.reserve(static_cast<std::size_t>(users));
  for (Index k = 0; k < users; ++k)
    sel.coders.push_back(codebook.codewords[static_cast<std::size_t>(pick(rng))]);

  auto evaluate = [&](const std::vector<AntennaCoder>& coders)
      -> std::pair<PrecoderMatrix, RateReport> {
    const CodedSamples coded = code_samples(receiver, estimate_tuple, coders);
    const PrecoderMatrix precoders =
        scheme_precoder(coded.estimate_rows, ctx.total_power, ctx.noise_power,
                        ctx.mode, ctx.grid_points);
    RateReport report = sample_average_rates(coded, precoders, ctx.noise_power);
    return {precoders, std::move(report)};
  };

  auto [precoders, report] = evaluate(sel.coders);
  sel.precoders = std::move(precoders);
  sel.report = std::move(report);
  sel.trace.push_back(sel.report.objective);

  for (Index pass = 1; pass <= max_passes; ++pass) {
    const double pass_start = sel.report.objective;
    for (Index k = 0; k < users; ++k) {
      Index scans = 0;
      Index best_index = -1;
      double best_objective = -std::numeric_limits<double>::infinity();
      PrecoderMatrix best_precoders;
      RateReport best_report;
      std::vector<AntennaCoder> candidate = sel.coders;
      for (Index j = 0; j < m; ++j) {
        candidate[static_cast<std::size_t>(k)] =
            codebook.codewords[static_cast<std::size_t>(j)];
        auto [cand_precoders, cand_report] = evaluate(candidate);
        ++scans;
        if (cand_report.objective > best_objective) {
          best_objective = cand_report.objective;
          best_index = j;
          best_precoders = std::move(cand_precoders);
          best_report = std::move(cand_report);
        }
      }
      sel.coders[static_cast<std::size_t>(k)] =
          codebook.codewords[static_cast<std::size_t>(best_index)];
      sel.precoders = std::move(best_precoders);
      sel.report = std::move(best_report);
      sel.trace.push_back(sel.report.objective);
      sel.scan_counts.push_back(scans);
    }
    sel.passes = pass;
    if (sel.report.objective - pass_start <=
        1e-4 * std::max(1.0, std::abs(pass_start)))
      break;
  }
  return sel;
}

}  // namespace pixel_rsma
