// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "pixel_rsma/wmmse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pixel_rsma/errors.hpp"

namespace pixel_rsma {

namespace {
constexpr double kLog2e = 1.4426950408889634;

// Reference-method constants for the smoothed projected-gradient solver.
constexpr double kSmoothingInitial = 1e-3;
constexpr double kSmoothingDecay = 0.1;
constexpr int kSmoothingStages = 3;
constexpr double kKktTol = 1e-6;
constexpr int kStageIters = 4000;
constexpr double kArmijoSlope = 1e-4;
constexpr int kMaxBacktracks = 60;
}  // namespace

// The block-coordinate machinery works in the natural-log convention, where
// u = 1/mse is the exact stationary weight and each block update provably
// never decreases the rate objective. In that convention the per-sample
// optimum is 1 - ln(u), i.e. 1 - R in nats.
double WmmseState::objective(StreamMode mode) const {
  const Index users = weight_private.rows();
  const Index s_count = weight_private.cols();
  const double inv = 1.0 / static_cast<double>(s_count);
  double total = 0.0;
  double worst_common = -std::numeric_limits<double>::infinity();
  for (Index k = 0; k < users; ++k) {
    double sum_p = 0.0;
    double sum_c = 0.0;
    for (Index s = 0; s < s_count; ++s) {
      sum_p += 1.0 - std::log(weight_private(k, s));
      sum_c += 1.0 - std::log(weight_common(k, s));
    }
    total += sum_p * inv;
    worst_common = std::max(worst_common, sum_c * inv);
  }
  if (mode == StreamMode::rsma && users > 0) total += worst_common;
  return total;
}

WmmseState mmse_update(const CodedSamples& coded, const PrecoderMatrix& precoders,
                       double noise_power) {
  const Index users = coded.users();
  const Index s_count = coded.samples();
  if (precoders.cols() != users + 1)
    throw DimensionMismatch("precoder stack must have K+1 columns");

  WmmseState state;
  state.eq_common.resize(users, s_count);
  state.eq_private.resize(users, s_count);
  state.weight_common.resize(users, s_count);
  state.weight_private.resize(users, s_count);
  state.mse_common.resize(users, s_count);
  state.mse_private.resize(users, s_count);
  state.awmse_common.resize(users, s_count);
  state.awmse_private.resize(users, s_count);
  state.avg_awmse_common = VectorXd::Zero(users);
  state.avg_awmse_private = VectorXd::Zero(users);

  for (Index k = 0; k < users; ++k) {
    const MatrixXcd& rows = coded.sample_rows[static_cast<std::size_t>(k)];
    double sum_c = 0.0;
    double sum_p = 0.0;
    for (Index s = 0; s < s_count; ++s) {
      const RowVectorXcd received = rows.row(s) * precoders;
      double all_private = 0.0;
      double other_private = 0.0;
      for (Index j = 1; j <= users; ++j) {
        const double p = std::norm(received(j));
        all_private += p;
        if (j != k + 1) other_private += p;
      }
      // Common stream: every private stream is interference.
      const double interf_c = all_private + noise_power;
      const double total_c = interf_c + std::norm(received(0));
      const cxd g_c = std::conj(received(0)) / total_c;
      const double mse_c = interf_c / total_c;
      const double u_c = 1.0 / mse_c;
      const double xi_c = u_c * mse_c - std::log2(u_c);
      // Private stream: SIC removed the common stream only.
      const double interf_p = other_private + noise_power;
      const double total_p = all_private + noise_power;
      const cxd g_p = std::conj(received(k + 1)) / total_p;
      const double mse_p = interf_p / total_p;
      const double u_p = 1.0 / mse_p;
      const double xi_p = u_p * mse_p - std::log2(u_p);

      state.eq_common(k, s) = g_c;
      state.eq_private(k, s) = g_p;
      state.weight_common(k, s) = u_c;
      state.weight_private(k, s) = u_p;
      state.mse_common(k, s) = mse_c;
      state.mse_private(k, s) = mse_p;
      state.awmse_common(k, s) = xi_c;
      state.awmse_private(k, s) = xi_p;
      sum_c += xi_c;
      sum_p += xi_p;
    }
    const double inv = 1.0 / static_cast<double>(s_count);
    state.avg_awmse_common(k) = sum_c * inv;
    state.avg_awmse_private(k) = sum_p * inv;
  }
  return state;
}

WmmseState mmse_update(const PixelReceiver& receiver,
                       const ChannelSampleSet& samples,
                       const std::vector<AntennaCoder>& coders,
                       const PrecoderMatrix& precoders, double noise_power) {
  return mmse_update(code_samples(receiver, samples, coders), precoders,
                     noise_power);
}

namespace {

/// Quadratic surrogate of the subproblem at fixed equalizers and weights:
/// xi_c,k(P) = p_c^H A_ck p_c + sum_j p_j^H A_ck p_j - 2 Re(b_ck^H p_c) + d_ck
/// xi_p,k(P) = sum_j p_j^H A_pk p_j - 2 Re(b_pk^H p_k) + d_pk
struct QuadModel {
  std::vector<MatrixXcd> a_common, a_private;
  std::vector<VectorXcd> b_common, b_private;
  VectorXd const_common, const_private;
  MatrixXcd a_private_sum;
  Index users = 0;
  Index dim = 0;

  VectorXd common_terms(const PrecoderMatrix& p) const {
    VectorXd xi(users);
    for (Index k = 0; k < users; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      double quad = 0.0;
      for (Index j = 0; j <= users; ++j)
        quad += (p.col(j).adjoint() * a_common[uk] * p.col(j)).value().real();
      const double lin = (b_common[uk].adjoint() * p.col(0)).value().real();
      xi(k) = quad - 2.0 * lin + const_common(k);
    }
    return xi;
  }

  double private_total(const PrecoderMatrix& p) const {
    double total = 0.0;
    for (Index k = 0; k < users; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      double quad = 0.0;
      for (Index j = 1; j <= users; ++j)
        quad += (p.col(j).adjoint() * a_private[uk] * p.col(j)).value().real();
      const double lin = (b_private[uk].adjoint() * p.col(k + 1)).value().real();
      total += quad - 2.0 * lin + const_private(k);
    }
    return total;
  }

  double objective(const PrecoderMatrix& p, StreamMode mode) const {
    double total = private_total(p);
    if (mode == StreamMode::rsma) total += common_terms(p).maxCoeff();
    return total;
  }

  /// Log-sum-exp smoothing of the common-MSE max; weights receives the
  /// softmax coefficients used by the gradient.
  double smoothed(const PrecoderMatrix& p, double mu, StreamMode mode,
                  VectorXd* weights) const {
    double total = private_total(p);
    if (mode == StreamMode::rsma) {
      const VectorXd xi = common_terms(p);
      const double peak = xi.maxCoeff();
      VectorXd w = ((xi.array() - peak) / mu).exp();
      const double z = w.sum();
      total += peak + mu * std::log(z);
      if (weights) *weights = w / z;
    } else if (weights) {
      weights->resize(0);
    }
    return total;
  }

  MatrixXcd gradient(const PrecoderMatrix& p, const VectorXd& weights,
                     StreamMode mode) const {
    MatrixXcd grad = MatrixXcd::Zero(dim, users + 1);
    if (mode == StreamMode::rsma) {
      MatrixXcd a_mix = MatrixXcd::Zero(dim, dim);
      VectorXcd b_mix = VectorXcd::Zero(dim);
      for (Index k = 0; k < users; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        a_mix += weights(k) * a_common[uk];
        b_mix += weights(k) * b_common[uk];
      }
      grad.col(0) = a_mix * p.col(0) - b_mix;
      for (Index j = 1; j <= users; ++j) grad.col(j) = a_mix * p.col(j);
    }
    for (Index j = 1; j <= users; ++j) {
      grad.col(j) += a_private_sum * p.col(j) -
                     b_private[static_cast<std::size_t>(j - 1)];
    }
    return grad;
  }
};

QuadModel build_quad_model(const CodedSamples& coded, const WmmseState& state,
                           double noise_power) {
  QuadModel model;
  model.users = coded.users();
  model.dim = coded.sample_rows.empty() ? 0 : coded.sample_rows[0].cols();
  const Index s_count = coded.samples();
  const double inv = 1.0 / static_cast<double>(s_count);
  model.const_common = VectorXd::Zero(model.users);
  model.const_private = VectorXd::Zero(model.users);
  model.a_private_sum = MatrixXcd::Zero(model.dim, model.dim);
  for (Index k = 0; k < model.users; ++k) {
    const MatrixXcd& rows = coded.sample_rows[static_cast<std::size_t>(k)];
    MatrixXcd ac = MatrixXcd::Zero(model.dim, model.dim);
    MatrixXcd ap = MatrixXcd::Zero(model.dim, model.dim);
    VectorXcd bc = VectorXcd::Zero(model.dim);
    VectorXcd bp = VectorXcd::Zero(model.dim);
    double dc = 0.0;
    double dp = 0.0;
    for (Index s = 0; s < s_count; ++s) {
      const VectorXcd h_adj = rows.row(s).adjoint();
      const double uc = state.weight_common(k, s);
      const double up = state.weight_private(k, s);
      const cxd gc = state.eq_common(k, s);
      const cxd gp = state.eq_private(k, s);
      ac += (uc * std::norm(gc)) * (h_adj * h_adj.adjoint());
      ap += (up * std::norm(gp)) * (h_adj * h_adj.adjoint());
      bc += (uc * std::conj(gc)) * h_adj;
      bp += (up * std::conj(gp)) * h_adj;
      // Natural-log convention (see WmmseState::objective).
      dc += uc * (std::norm(gc) * noise_power + 1.0) - std::log(uc);
      dp += up * (std::norm(gp) * noise_power + 1.0) - std::log(up);
    }
    model.a_common.push_back(ac * inv);
    model.a_private.push_back(ap * inv);
    model.b_common.push_back(bc * inv);
    model.b_private.push_back(bp * inv);
    model.const_common(k) = dc * inv;
    model.const_private(k) = dp * inv;
    model.a_private_sum += model.a_private.back();
  }
  return model;
}

PrecoderMatrix project_power(const PrecoderMatrix& p, double radius) {
  const double norm = p.norm();
  if (norm <= radius) return p;
  return p * (radius / norm);
}

double real_inner(const MatrixXcd& a, const MatrixXcd& b) {
  return a.conjugate().cwiseProduct(b).sum().real();
}

}  // namespace

PrecoderMatrix precoder_subproblem_solve(const CodedSamples& coded,
                                         const WmmseState& state,
                                         const PrecoderMatrix& precoders,
                                         double total_power, double noise_power,
                                         StreamMode mode) {
  if (!(total_power > 0)) throw InvalidArgument("total power must be > 0");
  const QuadModel model = build_quad_model(coded, state, noise_power);
  const double radius = std::sqrt(total_power);

  PrecoderMatrix current = project_power(precoders, radius);
  const double incoming_objective = model.objective(current, mode);
  PrecoderMatrix best = current;
  double best_objective = incoming_objective;

  bool kkt_met = false;
  double mu = kSmoothingInitial;
  for (int stage = 0; stage < kSmoothingStages; ++stage, mu *= kSmoothingDecay) {
    VectorXd weights;
    double f = model.smoothed(current, mu, mode, &weights);
    MatrixXcd grad = model.gradient(current, weights, mode);
    MatrixXcd prev_point, prev_grad;
    bool have_prev = false;
    double step = 1.0;
    kkt_met = false;

    for (int iter = 0; iter < kStageIters; ++iter) {
      const MatrixXcd fixed_point = project_power(current - grad, radius);
      if ((current - fixed_point).norm() <= kKktTol) {
        kkt_met = true;
        break;
      }
      if (have_prev) {
        const MatrixXcd s = current - prev_point;
        const MatrixXcd y = grad - prev_grad;
        const double sy = real_inner(s, y);
        step = sy > 1e-18 ? real_inner(s, s) / sy : 1.0;
        step = std::clamp(step, 1e-12, 1e8);
      }
      double tau = step;
      bool moved = false;
      for (int bt = 0; bt < kMaxBacktracks; ++bt, tau *= 0.5) {
        const PrecoderMatrix candidate = project_power(current - tau * grad, radius);
        const double dist2 = (candidate - current).squaredNorm();
        if (dist2 <= 1e-30) break;
        VectorXd cand_weights;
        const double f_cand = model.smoothed(candidate, mu, mode, &cand_weights);
        if (f_cand <= f - kArmijoSlope * dist2 / tau) {
          prev_point = current;
          prev_grad = grad;
          have_prev = true;
          current = candidate;
          f = f_cand;
          weights = std::move(cand_weights);
          grad = model.gradient(current, weights, mode);
          const double true_objective = model.objective(current, mode);
          if (true_objective < best_objective) {
            best_objective = true_objective;
            best = current;
          }
          moved = true;
          break;
        }
      }
      if (!moved) {
        kkt_met = (current - project_power(current - grad, radius)).norm() <= kKktTol;
        break;
      }
    }
  }

  if (!kkt_met && !(best_objective < incoming_objective - 1e-12))
    throw SolverStall("no improving feasible precoder step within budget");
  return best;
}

AntennaCoder antenna_coder_update(const PixelReceiver& receiver,
                                  const ChannelSampleSet& samples,
                                  const std::vector<AntennaCoder>& coders,
                                  const PrecoderMatrix& precoders, Index user,
                                  const SeboConfig& sebo_cfg, double noise_power,
                                  StreamMode mode) {
  const Index users = samples.users();
  if (user < 0 || user >= users) throw InvalidArgument("user index out of range");

  // Other users' rates are constants while user k's coder moves.
  const RateReport current =
      sample_average_rates(receiver, samples, coders, precoders, noise_power);
  double others_common = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < users; ++j)
    if (j != user) others_common = std::min(others_common, current.common_rates(j));

  auto objective = [&](const AntennaCoder& candidate) -> double {
    const auto rows = code_user_samples(receiver, samples, user, candidate);
    if (!rows) return std::min(0.0, others_common);
    const auto [rate_c, rate_p] =
        user_sample_rates(rows->sample_rows, precoders, user, noise_power);
    if (mode == StreamMode::sdma) return rate_p;
    return std::min(rate_c, others_common) + rate_p;
  };
  return sebo_search(objective, receiver.switch_count(), sebo_cfg,
                     coders[static_cast<std::size_t>(user)])
      .coder;
}

AlternatingResult alternating_optimize(const PixelReceiver& receiver,
                                       const ChannelSampleSet& samples,
                                       const OuterLoopConfig& outer_cfg,
                                       const SeboConfig& sebo_cfg,
                                       PrecoderMatrix init_precoders,
                                       std::vector<AntennaCoder> init_coders,
                                       double total_power, double noise_power,
                                       StreamMode mode) {
  AlternatingResult result;
  result.precoders = std::move(init_precoders);
  result.coders = std::move(init_coders);
  result.report = sample_average_rates(receiver, samples, result.coders,
                                       result.precoders, noise_power);
  result.trace.push_back(result.report.objective);

  const Index users = samples.users();
  for (Index outer = 1; outer <= outer_cfg.max_outer_iters; ++outer) {
    // Precoder phase: alternate closed-form MMSE updates with the convex
    // subproblem until the surrogate stops improving.
    const CodedSamples coded = code_samples(receiver, samples, result.coders);
    double surrogate_prev = std::numeric_limits<double>::infinity();
    for (Index inner = 0; inner < outer_cfg.max_inner_iters; ++inner) {
      const WmmseState state = mmse_update(coded, result.precoders, noise_power);
      const double surrogate = state.objective(mode);
      if (surrogate_prev - surrogate <=
          outer_cfg.inner_tol * std::max(1.0, std::abs(surrogate)))
        break;
      surrogate_prev = surrogate;
      try {
        result.precoders = precoder_subproblem_solve(
            coded, state, result.precoders, total_power, noise_power, mode);
      } catch (const SolverStall&) {
        ++result.solver_stalls;  // keep the previous precoders; stay monotone
        break;
      }
    }

    // Coder phase: sequential per-user SEBO with per-call kick substreams.
    for (Index k = 0; k < users; ++k) {
      SeboConfig cfg_k = sebo_cfg;
      cfg_k.seed = substream_seed(sebo_cfg.seed,
                                  {static_cast<std::uint64_t>(outer),
                                   static_cast<std::uint64_t>(k)});
      result.coders[static_cast<std::size_t>(k)] =
          antenna_coder_update(receiver, samples, result.coders, result.precoders,
                               k, cfg_k, noise_power, mode);
    }

    result.report = sample_average_rates(receiver, samples, result.coders,
                                         result.precoders, noise_power);
    const double previous = result.trace.back();
    result.trace.push_back(result.report.objective);
    if (result.report.objective - previous <=
        outer_cfg.rel_tol * std::max(1.0, std::abs(previous)))
      break;
  }
  return result;
}

}  // namespace pixel_rsma
