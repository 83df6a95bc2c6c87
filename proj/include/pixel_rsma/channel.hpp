// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_CHANNEL_HPP
#define PIXEL_RSMA_CHANNEL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "pixel_rsma/em_model.hpp"
#include "pixel_rsma/types.hpp"

namespace pixel_rsma {

/// Scenario parameters. Power quantities are linear; snr = total_power /
/// noise_power. The CSIT quality factor alpha in [0,1] sets the per-entry
/// estimation-error variance to error_scale * total_power^(-alpha).
struct ScenarioConfig {
  Index tx_antennas = 2;       // N
  Index users = 2;             // K
  Index switches = 11;         // Q
  Index spatial_samples = 16;  // N_s
  double total_power = 100.0;  // P_t
  double noise_power = 1.0;    // sigma^2
  double csit_alpha = 0.5;     // alpha
  double error_scale = 1.0;    // beta
  Index saa_samples = 20;      // S
  std::uint64_t seed = 1;

  double snr_db() const;
  void set_snr_db(double snr_db);
  /// Per-entry channel estimation error variance beta * P_t^(-alpha).
  double error_variance() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Full beamspace scenario: per-user virtual channels plus the transmit
/// pattern matrix. Only the tests and the dual-path equivalence checks need
/// this; the pipeline works in the effective channel domain directly.
struct VirtualScenario {
  std::vector<MatrixXcd> virtual_channels;  // H_v,k: 2*N_s x 2*N_s per user
  MatrixXcd tx_patterns;                    // E_T: 2*N_s x N, unit-norm columns
};

/// Per-user channel estimate with its conditional SAA error samples. Every
/// realization satisfies realization = estimate + error exactly.
struct ChannelSampleSet {
  std::vector<MatrixXcd> estimates;                  // r x N per user
  std::vector<std::vector<MatrixXcd>> errors;        // [user][sample]
  std::vector<std::vector<MatrixXcd>> realizations;  // [user][sample]

  Index users() const { return static_cast<Index>(estimates.size()); }
  Index samples() const {
    return realizations.empty() ? 0 : static_cast<Index>(realizations[0].size());
  }
};

/// Synthesizes a passive reciprocal pixel-antenna description: a symmetrized
/// complex Gaussian impedance network whose assembled real part is shifted to
/// positive semidefiniteness, plus i.i.d. complex Gaussian open-circuit
/// patterns. Deterministic given (cfg.seed).
std::pair<ImpedanceNetwork, OpenCircuitPatterns> synth_pixel_hardware(
    const ScenarioConfig& cfg);

/// Random beamspace scenario with i.i.d. CN(0,1) virtual channels and
/// unit-norm transmit pattern columns. Deterministic given (cfg.seed, index).
VirtualScenario synth_virtual_scenario(const ScenarioConfig& cfg,
                                       std::uint64_t index = 0);

/// Effective channels H_e,k = U^T H_v,k E_T per user.
std::vector<MatrixXcd> derive_effective_channel(const VirtualScenario& scen,
                                                const PatternBasis& basis);

/// True effective channels drawn directly as i.i.d. CN(0,1) r x N matrices,
/// one per user; the default generator for experiments.
std::vector<MatrixXcd> draw_effective_true(const ScenarioConfig& cfg, Index rank,
                                           std::uint64_t realization);

/// Splits each true channel into estimate plus one error draw, then attaches
/// S fresh conditional error samples at variance cfg.error_variance().
/// Substreams are addressed by (seed, realization, user, sample), so the
/// result is independent of worker count.
ChannelSampleSet draw_sample_set(const ScenarioConfig& cfg,
                                 const std::vector<MatrixXcd>& true_channels,
                                 std::uint64_t realization);

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_CHANNEL_HPP
