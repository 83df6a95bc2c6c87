// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "pixel_rsma/rsma.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

#include "pixel_rsma/errors.hpp"

namespace pixel_rsma {

namespace {
constexpr double kLog2e = 1.4426950408889634;  // 1 / ln 2

inline double rate_bits(double sinr) { return std::log1p(sinr) * kLog2e; }
}  // namespace

RateReport RateReport::assemble(VectorXd common, VectorXd priv) {
  RateReport report;
  report.common_rates = std::move(common);
  report.private_rates = std::move(priv);
  report.common_rate = report.common_rates.size() > 0
                           ? report.common_rates.minCoeff()
                           : 0.0;
  // Index-order sum keeps the objective bit-stable and recomputable.
  double sum = report.common_rate;
  for (Index k = 0; k < report.private_rates.size(); ++k)
    sum += report.private_rates(k);
  report.objective = sum;
  return report;
}

CodedSamples code_samples(const PixelReceiver& receiver,
                          const ChannelSampleSet& samples,
                          const std::vector<AntennaCoder>& coders) {
  if (static_cast<Index>(coders.size()) != samples.users())
    throw DimensionMismatch("one coder per user required");
  const Index users = samples.users();
  const Index s_count = samples.samples();
  CodedSamples coded;
  coded.sample_rows.resize(static_cast<std::size_t>(users));
  coded.estimate_rows.resize(static_cast<std::size_t>(users));
  coded.zero_pattern.assign(static_cast<std::size_t>(users), false);
  for (Index k = 0; k < users; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const Index n = samples.estimates[uk].cols();
    auto w = receiver.try_pattern_coder(coders[uk]);
    if (!w) {
      coded.sample_rows[uk] = MatrixXcd::Zero(s_count, n);
      coded.estimate_rows[uk] = RowVectorXcd::Zero(n);
      coded.zero_pattern[uk] = true;
      continue;
    }
    coded.estimate_rows[uk] = coded_channel_row(*w, samples.estimates[uk]);
    MatrixXcd rows(s_count, n);
    for (Index s = 0; s < s_count; ++s)
      rows.row(s) =
          coded_channel_row(*w, samples.realizations[uk][static_cast<std::size_t>(s)]);
    coded.sample_rows[uk] = std::move(rows);
  }
  return coded;
}

std::optional<UserRows> code_user_samples(const PixelReceiver& receiver,
                                          const ChannelSampleSet& samples,
                                          Index user, const AntennaCoder& coder) {
  const auto uk = static_cast<std::size_t>(user);
  auto w = receiver.try_pattern_coder(coder);
  if (!w) return std::nullopt;
  UserRows rows;
  rows.estimate_row = coded_channel_row(*w, samples.estimates[uk]);
  const Index s_count = samples.samples();
  rows.sample_rows.resize(s_count, samples.estimates[uk].cols());
  for (Index s = 0; s < s_count; ++s)
    rows.sample_rows.row(s) =
        coded_channel_row(*w, samples.realizations[uk][static_cast<std::size_t>(s)]);
  return rows;
}

std::pair<double, double> user_sample_rates(const MatrixXcd& sample_rows,
                                            const PrecoderMatrix& precoders,
                                            Index user, double noise_power) {
  const Index s_count = sample_rows.rows();
  double common_sum = 0.0;
  double private_sum = 0.0;
  for (Index s = 0; s < s_count; ++s) {
    const auto [gamma_c, gamma_p] =
        sinr_pair(sample_rows.row(s), precoders, user, noise_power);
    common_sum += rate_bits(gamma_c);
    private_sum += rate_bits(gamma_p);
  }
  const double inv = 1.0 / static_cast<double>(s_count);
  return {common_sum * inv, private_sum * inv};
}

RateReport sample_average_rates(const CodedSamples& coded,
                                const PrecoderMatrix& precoders,
                                double noise_power) {
  if (!(noise_power > 0)) throw InvalidArgument("noise power must be > 0");
  const Index users = coded.users();
  if (precoders.cols() != users + 1)
    throw DimensionMismatch("precoder stack must have K+1 columns");
  VectorXd common = VectorXd::Zero(users);
  VectorXd priv = VectorXd::Zero(users);
  for (Index k = 0; k < users; ++k) {
    if (coded.zero_pattern[static_cast<std::size_t>(k)]) continue;
    const auto [rc, rp] = user_sample_rates(
        coded.sample_rows[static_cast<std::size_t>(k)], precoders, k, noise_power);
    common(k) = rc;
    priv(k) = rp;
  }
  return RateReport::assemble(std::move(common), std::move(priv));
}

RateReport sample_average_rates(const PixelReceiver& receiver,
                                const ChannelSampleSet& samples,
                                const std::vector<AntennaCoder>& coders,
                                const PrecoderMatrix& precoders,
                                double noise_power) {
  return sample_average_rates(code_samples(receiver, samples, coders), precoders,
                              noise_power);
}

double estimate_objective(const std::vector<RowVectorXcd>& estimate_rows,
                          const PrecoderMatrix& precoders, double noise_power) {
  const Index users = static_cast<Index>(estimate_rows.size());
  double min_common = std::numeric_limits<double>::infinity();
  double private_sum = 0.0;
  for (Index k = 0; k < users; ++k) {
    const auto [gamma_c, gamma_p] = sinr_pair(
        estimate_rows[static_cast<std::size_t>(k)], precoders, k, noise_power);
    min_common = std::min(min_common, rate_bits(gamma_c));
    private_sum += rate_bits(gamma_p);
  }
  return (users > 0 ? min_common : 0.0) + private_sum;
}

namespace {

MatrixXcd stack_rows(const std::vector<RowVectorXcd>& estimate_rows) {
  if (estimate_rows.empty())
    throw InvalidArgument("at least one estimate row required");
  const Index n = estimate_rows[0].size();
  MatrixXcd stacked(static_cast<Index>(estimate_rows.size()), n);
  for (std::size_t k = 0; k < estimate_rows.size(); ++k) {
    if (estimate_rows[k].size() != n)
      throw DimensionMismatch("estimate rows must share a common length");
    stacked.row(static_cast<Index>(k)) = estimate_rows[k];
  }
  return stacked;
}

struct ZfDirections {
  VectorXcd common;    // dominant transmit-side singular direction
  MatrixXcd privates;  // normalized pseudo-inverse columns, N x K
};

// Throws RankDeficient when the stack cannot be zero-forced.
ZfDirections zf_directions(const MatrixXcd& stacked) {
  const Index users = stacked.rows();
  const Index n = stacked.cols();
  Eigen::JacobiSVD<MatrixXcd> svd(stacked,
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorXd& sv = svd.singularValues();
  if (n < users || sv.size() < users || !(sv(0) > 0) ||
      sv(users - 1) <= 1e-10 * sv(0))
    throw RankDeficient("stacked estimate matrix has rank below user count");
  ZfDirections dirs;
  dirs.common = svd.matrixV().col(0);
  // Right pseudo-inverse V S^-1 U^H; columns normalized.
  dirs.privates = svd.matrixV().leftCols(users) *
                  sv.head(users).cwiseInverse().asDiagonal() *
                  svd.matrixU().adjoint();
  for (Index k = 0; k < users; ++k) dirs.privates.col(k).normalize();
  return dirs;
}

PrecoderMatrix assemble_precoder(const ZfDirections& dirs, double split,
                                 double total_power, Index users, Index n) {
  PrecoderMatrix precoders = PrecoderMatrix::Zero(n, users + 1);
  if (split > 0.0) precoders.col(0) = std::sqrt(split * total_power) * dirs.common;
  const double private_power =
      (1.0 - split) * total_power / static_cast<double>(users);
  if (private_power > 0.0)
    for (Index k = 0; k < users; ++k)
      precoders.col(k + 1) = std::sqrt(private_power) * dirs.privates.col(k);
  return precoders;
}

}  // namespace

PrecoderMatrix rs_zf_svd_candidate(const MatrixXcd& stacked_estimates,
                                   double split, double total_power) {
  if (split < 0.0 || split > 1.0)
    throw InvalidArgument("power split must lie in [0, 1]");
  const ZfDirections dirs = zf_directions(stacked_estimates);
  return assemble_precoder(dirs, split, total_power, stacked_estimates.rows(),
                           stacked_estimates.cols());
}

PrecoderMatrix rs_zf_svd_precoder(const std::vector<RowVectorXcd>& estimate_rows,
                                  double total_power, double noise_power,
                                  Index grid_points) {
  if (grid_points < 2) throw InvalidArgument("power-split grid needs >= 2 points");
  const MatrixXcd stacked = stack_rows(estimate_rows);
  const ZfDirections dirs = zf_directions(stacked);
  const Index users = stacked.rows();

  PrecoderMatrix best;
  double best_objective = -std::numeric_limits<double>::infinity();
  for (Index g = 0; g < grid_points; ++g) {
    const double split =
        static_cast<double>(g) / static_cast<double>(grid_points - 1);
    PrecoderMatrix candidate =
        assemble_precoder(dirs, split, total_power, users, stacked.cols());
    const double objective =
        estimate_objective(estimate_rows, candidate, noise_power);
    if (objective > best_objective) {
      best_objective = objective;
      best = std::move(candidate);
    }
  }
  return best;
}

PrecoderMatrix sdma_zf_precoder(const std::vector<RowVectorXcd>& estimate_rows,
                                double total_power) {
  const MatrixXcd stacked = stack_rows(estimate_rows);
  const ZfDirections dirs = zf_directions(stacked);
  return assemble_precoder(dirs, 0.0, total_power, stacked.rows(), stacked.cols());
}

PrecoderMatrix scheme_precoder(const std::vector<RowVectorXcd>& estimate_rows,
                               double total_power, double noise_power,
                               StreamMode mode, Index grid_points) {
  const Index users = static_cast<Index>(estimate_rows.size());
  const Index n = users > 0 ? estimate_rows[0].size() : 0;
  try {
    return mode == StreamMode::rsma
               ? rs_zf_svd_precoder(estimate_rows, total_power, noise_power,
                                    grid_points)
               : sdma_zf_precoder(estimate_rows, total_power);
  } catch (const RankDeficient&) {
    PrecoderMatrix fallback = PrecoderMatrix::Zero(n, users + 1);
    if (mode == StreamMode::rsma) {
      // All power on the common stream along the dominant direction.
      const MatrixXcd stacked = stack_rows(estimate_rows);
      Eigen::JacobiSVD<MatrixXcd> svd(stacked, Eigen::ComputeThinV);
      if (svd.singularValues().size() > 0 && svd.singularValues()(0) > 0)
        fallback.col(0) = std::sqrt(total_power) * svd.matrixV().col(0);
    } else {
      // Equal-power matched filters.
      for (Index k = 0; k < users; ++k) {
        const RowVectorXcd& h = estimate_rows[static_cast<std::size_t>(k)];
        const double norm = h.norm();
        if (norm > 0)
          fallback.col(k + 1) =
              std::sqrt(total_power / static_cast<double>(users)) *
              (h.adjoint() / norm);
      }
    }
    return fallback;
  }
}

}  // namespace pixel_rsma
