// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "pixel_rsma/channel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "pixel_rsma/errors.hpp"
#include "pixel_rsma/rng.hpp"

namespace pixel_rsma {

double ScenarioConfig::snr_db() const {
  return 10.0 * std::log10(total_power / noise_power);
}

void ScenarioConfig::set_snr_db(double snr_db) {
  total_power = noise_power * std::pow(10.0, snr_db / 10.0);
}

double ScenarioConfig::error_variance() const {
  return error_scale * std::pow(total_power, -csit_alpha);
}

void ScenarioConfig::validate() const {
  if (tx_antennas < 1) throw ConfigError("N", "must be >= 1");
  if (users < 1) throw ConfigError("K", "must be >= 1");
  if (switches < 1) throw ConfigError("Q", "must be >= 1");
  if (spatial_samples < 1) throw ConfigError("Ns", "must be >= 1");
  if (!(total_power > 0)) throw ConfigError("snr_db", "total power must be > 0");
  if (!(noise_power > 0)) throw ConfigError("snr_db", "noise power must be > 0");
  if (csit_alpha < 0.0 || csit_alpha > 1.0)
    throw ConfigError("alpha", "must lie in [0, 1]");
  if (error_scale < 0.0) throw ConfigError("beta", "must be >= 0");
  if (saa_samples < 1) throw ConfigError("S", "must be >= 1");
}

std::pair<ImpedanceNetwork, OpenCircuitPatterns> synth_pixel_hardware(
    const ScenarioConfig& cfg) {
  cfg.validate();
  const Index q = cfg.switches;
  auto rng = make_rng(cfg.seed, StreamKind::hardware, {});

  // Symmetrize for reciprocity; draws are standard real Gaussians.
  const MatrixXd a = randn_matrix(q, q, rng);
  const MatrixXd b = randn_matrix(q, q, rng);
  ImpedanceNetwork net;
  net.pixel_self = (0.5 * (a + a.transpose())).cast<cxd>() +
                   cxd(0, 1) * (0.5 * (b + b.transpose())).cast<cxd>();
  const MatrixXd trans_parts = randn_matrix(q, 2, rng);
  net.trans = trans_parts.col(0).cast<cxd>() + cxd(0, 1) * trans_parts.col(1).cast<cxd>();
  const MatrixXd self_parts = randn_matrix(1, 2, rng);
  net.antenna_self = cxd(self_parts(0, 0), self_parts(0, 1));

  // Passivity repair: shift the real part of the assembled matrix until its
  // spectrum is nonnegative.
  const MatrixXd re = net.assembled().real();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (re + re.transpose()));
  const double lambda_min = eig.eigenvalues().minCoeff();
  if (lambda_min < 0.0) {
    const double shift = std::abs(lambda_min) + 0.1;
    net.antenna_self += shift;
    net.pixel_self.diagonal().array() += shift;
  }

  OpenCircuitPatterns patterns;
  patterns.patterns = randcn_matrix(2 * cfg.spatial_samples, q + 1, 1.0, rng);
  return {std::move(net), std::move(patterns)};
}

VirtualScenario synth_virtual_scenario(const ScenarioConfig& cfg,
                                       std::uint64_t index) {
  cfg.validate();
  const Index rows = 2 * cfg.spatial_samples;
  VirtualScenario scen;
  scen.virtual_channels.reserve(static_cast<std::size_t>(cfg.users));
  for (Index k = 0; k < cfg.users; ++k) {
    auto rng = make_rng(cfg.seed, StreamKind::virtual_scenario,
                        {index, static_cast<std::uint64_t>(k)});
    scen.virtual_channels.push_back(randcn_matrix(rows, rows, 1.0, rng));
  }
  auto rng = make_rng(cfg.seed, StreamKind::virtual_scenario,
                      {index, static_cast<std::uint64_t>(cfg.users)});
  scen.tx_patterns = randcn_matrix(rows, cfg.tx_antennas, 1.0, rng);
  for (Index j = 0; j < scen.tx_patterns.cols(); ++j)
    scen.tx_patterns.col(j).normalize();
  return scen;
}

std::vector<MatrixXcd> derive_effective_channel(const VirtualScenario& scen,
                                                const PatternBasis& basis) {
  std::vector<MatrixXcd> effective;
  effective.reserve(scen.virtual_channels.size());
  for (const MatrixXcd& hv : scen.virtual_channels) {
    if (hv.rows() != basis.left.rows() || hv.cols() != scen.tx_patterns.rows())
      throw DimensionMismatch("virtual channel does not match basis/patterns");
    effective.push_back(basis.left.transpose() * hv * scen.tx_patterns);
  }
  return effective;
}

std::vector<MatrixXcd> draw_effective_true(const ScenarioConfig& cfg, Index rank,
                                           std::uint64_t realization) {
  std::vector<MatrixXcd> channels;
  channels.reserve(static_cast<std::size_t>(cfg.users));
  for (Index k = 0; k < cfg.users; ++k) {
    auto rng = make_rng(cfg.seed, StreamKind::true_channel,
                        {realization, static_cast<std::uint64_t>(k)});
    channels.push_back(randcn_matrix(rank, cfg.tx_antennas, 1.0, rng));
  }
  return channels;
}

ChannelSampleSet draw_sample_set(const ScenarioConfig& cfg,
                                 const std::vector<MatrixXcd>& true_channels,
                                 std::uint64_t realization) {
  const double var = cfg.error_variance();
  ChannelSampleSet set;
  const auto users = true_channels.size();
  set.estimates.resize(users);
  set.errors.resize(users);
  set.realizations.resize(users);
  for (std::size_t k = 0; k < users; ++k) {
    const MatrixXcd& truth = true_channels[k];
    auto split_rng = make_rng(cfg.seed, StreamKind::estimate_split,
                              {realization, static_cast<std::uint64_t>(k)});
    set.estimates[k] =
        truth - randcn_matrix(truth.rows(), truth.cols(), var, split_rng);
    set.errors[k].reserve(static_cast<std::size_t>(cfg.saa_samples));
    set.realizations[k].reserve(static_cast<std::size_t>(cfg.saa_samples));
    for (Index s = 0; s < cfg.saa_samples; ++s) {
      auto rng = make_rng(cfg.seed, StreamKind::saa_error,
                          {realization, static_cast<std::uint64_t>(k),
                           static_cast<std::uint64_t>(s)});
      const MatrixXcd draw = randcn_matrix(truth.rows(), truth.cols(), var, rng);
      set.realizations[k].push_back(set.estimates[k] + draw);
      // Store the rounded difference so realization = estimate + error holds
      // bit-exactly.
      set.errors[k].push_back(set.realizations[k].back() - set.estimates[k]);
    }
  }
  return set;
}

}  // namespace pixel_rsma
