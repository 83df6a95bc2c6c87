// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_WMMSE_HPP
#define PIXEL_RSMA_WMMSE_HPP

#include <vector>

#include "pixel_rsma/rsma.hpp"
#include "pixel_rsma/sebo.hpp"

namespace pixel_rsma {

/// Closed-form MMSE equalizers, weights, and augmented weighted MSEs per
/// (user, sample) for both streams. At these optimal values the sample
/// averages satisfy xi_c = 1 - R_c and xi_p = 1 - R_p per user.
struct WmmseState {
  // K x S blocks, one row per user.
  MatrixXcd eq_common, eq_private;           // g*
  MatrixXd weight_common, weight_private;    // u* = 1/mse
  MatrixXd mse_common, mse_private;          // minimum MSEs
  MatrixXd awmse_common, awmse_private;      // xi* = u*mse - log2(u) = 1 - R
  VectorXd avg_awmse_common, avg_awmse_private;  // sample averages per user

  /// Convex surrogate minimized by the precoder subproblem,
  /// max_k xi_c,k + sum_k xi_p,k (the common term drops under SDMA),
  /// evaluated in the natural-log convention whose stationary weight is
  /// exactly u = 1/mse; minimizing it never decreases the rate objective.
  double objective(StreamMode mode) const;
};

struct OuterLoopConfig {
  double rel_tol = 1e-4;
  Index max_outer_iters = 50;
  double inner_tol = 1e-5;     // WMMSE loop tolerance on the surrogate
  Index max_inner_iters = 100;
};

/// Evaluates the closed-form equalizer/weight update for fixed precoders.
WmmseState mmse_update(const CodedSamples& coded, const PrecoderMatrix& precoders,
                       double noise_power);

/// Coder-level wrapper matching the sample-set interface.
WmmseState mmse_update(const PixelReceiver& receiver,
                       const ChannelSampleSet& samples,
                       const std::vector<AntennaCoder>& coders,
                       const PrecoderMatrix& precoders, double noise_power);

/// Solves the convex precoder subproblem at fixed equalizers and weights:
/// minimize max_k xi_c,k(P) + sum_k xi_p,k(P) subject to the power budget.
/// The reference method is a projected gradient on a log-sum-exp smoothing
/// of the per-user common-MSE max (mu = 1e-3, annealed x0.1 twice) with
/// Barzilai-Borwein steps and Armijo backtracking. The returned point never
/// increases the unsmoothed objective relative to the incoming precoders,
/// and the projected-gradient KKT residual is at most 1e-6 at termination.
/// Throws SolverStall when neither holds within the iteration budget.
PrecoderMatrix precoder_subproblem_solve(const CodedSamples& coded,
                                         const WmmseState& state,
                                         const PrecoderMatrix& precoders,
                                         double total_power, double noise_power,
                                         StreamMode mode);

/// Improves user k's antenna coder by SEBO on the subproblem objective
/// min(R_c,k(b), min_{j != k} R_c,j) + R_p,k(b); other users' rates are
/// constants during the search. Never returns a worse coder.
AntennaCoder antenna_coder_update(const PixelReceiver& receiver,
                                  const ChannelSampleSet& samples,
                                  const std::vector<AntennaCoder>& coders,
                                  const PrecoderMatrix& precoders, Index user,
                                  const SeboConfig& sebo_cfg, double noise_power,
                                  StreamMode mode);

struct AlternatingResult {
  PrecoderMatrix precoders;
  std::vector<AntennaCoder> coders;
  RateReport report;
  std::vector<double> trace;  // objective after init and each outer iteration
  Index solver_stalls = 0;    // subproblem stalls survived (warnings)
};

/// Alternating optimization: WMMSE precoder rounds to inner convergence,
/// then sequential per-user SEBO coder updates, until the objective's
/// relative change drops below rel_tol or the iteration budget runs out.
/// The objective trace is non-decreasing within 1e-8.
AlternatingResult alternating_optimize(const PixelReceiver& receiver,
                                       const ChannelSampleSet& samples,
                                       const OuterLoopConfig& outer_cfg,
                                       const SeboConfig& sebo_cfg,
                                       PrecoderMatrix init_precoders,
                                       std::vector<AntennaCoder> init_coders,
                                       double total_power, double noise_power,
                                       StreamMode mode);

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_WMMSE_HPP
