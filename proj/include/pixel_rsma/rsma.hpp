// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_RSMA_HPP
#define PIXEL_RSMA_RSMA_HPP

#include <utility>
#include <vector>

#include "pixel_rsma/channel.hpp"
#include "pixel_rsma/em_model.hpp"
#include "pixel_rsma/types.hpp"

namespace pixel_rsma {

/// Whether the common stream is in play. SDMA is the p_c = 0 special case:
/// private streams only, all interference treated as noise.
enum class StreamMode { rsma, sdma };

/// Sample-average rate report for one channel estimate. The common rate is
/// the minimum over users, which every user must be able to decode.
struct RateReport {
  VectorXd common_rates;   // per-user common-stream rates, bits/s/Hz
  VectorXd private_rates;  // per-user private-stream rates
  double common_rate = 0.0;  // min over users
  double objective = 0.0;    // common_rate + sum of private rates

  static RateReport assemble(VectorXd common, VectorXd priv);
};

/// SINRs at one user for decoding the common stream and, after SIC removes
/// it, the user's private stream. The common stream sees every private
/// stream as interference; the private stream sees only the other users'.
template <typename DerivedH>
std::pair<double, double> sinr_pair(const Eigen::MatrixBase<DerivedH>& channel_row,
                                    const PrecoderMatrix& precoders, Index user,
                                    double noise_power) {
  if (channel_row.size() != precoders.rows())
    throw DimensionMismatch("channel row length must match precoder rows");
  const RowVectorXcd received = channel_row * precoders;
  const Index users = precoders.cols() - 1;
  double private_interference = 0.0;  // other users' private streams
  double all_private = 0.0;
  for (Index j = 1; j <= users; ++j) {
    const double p = std::norm(received(j));
    all_private += p;
    if (j != user + 1) private_interference += p;
  }
  const double gamma_c = std::norm(received(0)) / (all_private + noise_power);
  const double gamma_p =
      std::norm(received(user + 1)) / (private_interference + noise_power);
  return {gamma_c, gamma_p};
}

/// Per-user coded channel rows, one S x N block per user (row s is
/// w_k^H H_k^(s)), plus the coded estimate rows the closed-form precoders
/// work from. Users whose coder radiates nothing carry zero rows and are
/// flagged; they contribute rate 0.
struct CodedSamples {
  std::vector<MatrixXcd> sample_rows;       // per user: S x N
  std::vector<RowVectorXcd> estimate_rows;  // per user: 1 x N
  std::vector<bool> zero_pattern;

  Index users() const { return static_cast<Index>(sample_rows.size()); }
  Index samples() const {
    return sample_rows.empty() ? 0 : sample_rows[0].rows();
  }
};

/// Applies each user's coder to its sample set.
CodedSamples code_samples(const PixelReceiver& receiver,
                          const ChannelSampleSet& samples,
                          const std::vector<AntennaCoder>& coders);

/// Recodes a single user's rows for a candidate coder; empty optional when
/// the candidate radiates nothing.
struct UserRows {
  MatrixXcd sample_rows;
  RowVectorXcd estimate_row;
};
std::optional<UserRows> code_user_samples(const PixelReceiver& receiver,
                                          const ChannelSampleSet& samples,
                                          Index user, const AntennaCoder& coder);

/// Sample-average rates over the coded rows. Reduction over samples runs in
/// index order so results are bit-stable.
RateReport sample_average_rates(const CodedSamples& coded,
                                const PrecoderMatrix& precoders,
                                double noise_power);

/// Coder-level wrapper: codes the samples, then rates them. Zero-pattern
/// coders become rate-0 users.
RateReport sample_average_rates(const PixelReceiver& receiver,
                                const ChannelSampleSet& samples,
                                const std::vector<AntennaCoder>& coders,
                                const PrecoderMatrix& precoders,
                                double noise_power);

/// Rates for one user only, given fixed precoders: the sample-average common
/// and private rates. Used by the coder search, where other users' rates are
/// constants.
std::pair<double, double> user_sample_rates(const MatrixXcd& sample_rows,
                                            const PrecoderMatrix& precoders,
                                            Index user, double noise_power);

/// One-sample sum-rate objective on the estimate rows: min common rate plus
/// private rates. The closed-form precoders score their power-split grid
/// with this.
double estimate_objective(const std::vector<RowVectorXcd>& estimate_rows,
                          const PrecoderMatrix& precoders, double noise_power);

/// Builds the rate-splitting precoder for a fixed power split t: the common
/// stream rides the dominant transmit-side singular direction of the stacked
/// estimates at power t * P_t, and each private stream gets a normalized
/// zero-forcing direction at power (1 - t) * P_t / K.
PrecoderMatrix rs_zf_svd_candidate(const MatrixXcd& stacked_estimates,
                                   double split, double total_power);

/// Low-complexity rate-splitting precoder: zero-forcing privates, common
/// stream on the dominant singular direction, one-dimensional grid search
/// over the common/private power split scored on the estimate. Throws
/// RankDeficient when the stacked estimate matrix has rank < K within 1e-10;
/// callers fall back to the all-common split.
PrecoderMatrix rs_zf_svd_precoder(const std::vector<RowVectorXcd>& estimate_rows,
                                  double total_power, double noise_power,
                                  Index grid_points = 101);

/// Zero-forcing SDMA precoder with equal power allocation and no common
/// stream. Throws RankDeficient as above.
PrecoderMatrix sdma_zf_precoder(const std::vector<RowVectorXcd>& estimate_rows,
                                double total_power);

/// Fallback-wrapped precoder used by the selection pipelines: on rank
/// deficiency the rate-splitting variant puts all power on the common
/// stream, the SDMA variant falls back to equal-power matched filters.
PrecoderMatrix scheme_precoder(const std::vector<RowVectorXcd>& estimate_rows,
                               double total_power, double noise_power,
                               StreamMode mode, Index grid_points = 101);

/// Frobenius power of a precoder stack.
inline double precoder_power(const PrecoderMatrix& precoders) {
  return precoders.squaredNorm();
}

inline bool power_feasible(const PrecoderMatrix& precoders, double total_power,
                           double slack = 1e-9) {
  return precoder_power(precoders) <= total_power + slack;
}

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_RSMA_HPP
