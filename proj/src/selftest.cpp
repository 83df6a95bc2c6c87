// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <cmath>
#include <ostream>

#include "pixel_rsma/harness.hpp"
#include "pixel_rsma/rng.hpp"

namespace pixel_rsma {

namespace {

bool check(std::ostream& out, const std::string& name, bool ok) {
  out << "selftest " << name << ": " << (ok ? "ok" : "FAIL") << '\n';
  return ok;
}

bool path_equivalence(std::ostream& out) {
  ScenarioConfig cfg;
  cfg.switches = 4;
  cfg.spatial_samples = 4;
  bool ok = true;
  for (std::uint64_t trial = 0; trial < 20 && ok; ++trial) {
    cfg.seed = 100 + trial;
    auto [net, patterns] = synth_pixel_hardware(cfg);
    const PatternBasis basis = pattern_basis(patterns);
    const VirtualScenario scen = synth_virtual_scenario(cfg, trial);
    const auto effective = derive_effective_channel(scen, basis);
    auto rng = make_rng(cfg.seed, {7, trial});
    const AntennaCoder coder = AntennaCoder::random(cfg.switches, rng);
    const auto [w, antenna_current] = normalized_pattern_coder(basis, net, coder);
    const VectorXcd currents = solve_port_currents(net, coder, antenna_current);
    for (std::size_t k = 0; k < effective.size(); ++k) {
      const RowVectorXcd beamspace = currents.transpose() *
                                     patterns.patterns.transpose() *
                                     scen.virtual_channels[k] * scen.tx_patterns;
      const RowVectorXcd coded_row = coded_channel_row(w, effective[k]);
      ok = ok && (beamspace - coded_row).norm() <= 1e-10 * beamspace.norm();
    }
  }
  return check(out, "channel-path-equivalence", ok);
}

bool rate_wmmse_identity(std::ostream& out) {
  bool ok = true;
  for (std::uint64_t trial = 0; trial < 50 && ok; ++trial) {
    auto rng = make_rng(4242, {trial});
    const Index users = 2;
    const Index n = 2;
    const Index s_count = 3;
    CodedSamples coded;
    coded.zero_pattern.assign(users, false);
    for (Index k = 0; k < users; ++k) {
      coded.sample_rows.push_back(randcn_matrix(s_count, n, 1.0, rng));
      coded.estimate_rows.push_back(randcn_matrix(1, n, 1.0, rng).row(0));
    }
    const PrecoderMatrix precoders = randcn_matrix(n, users + 1, 1.0, rng);
    const WmmseState state = mmse_update(coded, precoders, 1.0);
    const RateReport report = sample_average_rates(coded, precoders, 1.0);
    for (Index k = 0; k < users; ++k) {
      ok = ok && std::abs(state.avg_awmse_common(k) - (1.0 - report.common_rates(k))) <= 1e-9;
      ok = ok && std::abs(state.avg_awmse_private(k) - (1.0 - report.private_rates(k))) <= 1e-9;
    }
  }
  return check(out, "rate-wmmse-identity", ok);
}

bool sebo_exactness(std::ostream& out) {
  const Index q = 8;
  bool ok = true;
  for (std::uint64_t trial = 0; trial < 10 && ok; ++trial) {
    auto rng = make_rng(777, {trial});
    const MatrixXd quad = randn_matrix(q, q, rng);
    const MatrixXd lin = randn_matrix(q, 1, rng);
    auto objective = [&](const AntennaCoder& b) {
      double value = 0.0;
      for (Index i = 0; i < q; ++i) {
        if (!b.open(i)) continue;
        value += lin(i, 0);
        for (Index j = 0; j < q; ++j)
          if (b.open(j) && i != j) value += quad(i, j);
      }
      return value;
    };
    double best = -1e300;
    for (std::uint64_t v = 0; v < (1u << q); ++v) {
      AntennaCoder b = AntennaCoder::zeros(q);
      for (Index t = 0; t < q; ++t) b.set(t, ((v >> t) & 1u) != 0);
      best = std::max(best, objective(b));
    }
    SeboConfig cfg;
    cfg.block_size = q;
    cfg.iterations = 1;
    cfg.restarts = 1;
    cfg.flips_per_kick = 0;
    cfg.seed = trial;
    const auto result = sebo_search(objective, q, cfg, AntennaCoder::zeros(q));
    ok = ok && std::abs(result.value - best) <= 1e-12;
  }
  return check(out, "sebo-exhaustive-exactness", ok);
}

bool monotone_alternating(std::ostream& out) {
  ScenarioConfig cfg;
  cfg.switches = 6;
  cfg.spatial_samples = 4;
  cfg.saa_samples = 5;
  cfg.set_snr_db(10.0);
  bool ok = true;
  for (std::uint64_t trial = 0; trial < 3 && ok; ++trial) {
    cfg.seed = 50 + trial;
    auto [net, patterns] = synth_pixel_hardware(cfg);
    const PixelReceiver receiver(std::move(net), std::move(patterns));
    const auto truths = draw_effective_true(cfg, receiver.rank(), trial);
    const auto samples = draw_sample_set(cfg, truths, trial);
    std::vector<AntennaCoder> coders(static_cast<std::size_t>(cfg.users),
                                     AntennaCoder::zeros(cfg.switches));
    const CodedSamples coded = code_samples(receiver, samples, coders);
    const PrecoderMatrix init =
        scheme_precoder(coded.estimate_rows, cfg.total_power, cfg.noise_power,
                        StreamMode::rsma);
    SeboConfig sebo;
    sebo.block_size = 6;
    sebo.iterations = 2;
    sebo.flips_per_kick = 3;
    sebo.restarts = 1;
    sebo.seed = trial;
    OuterLoopConfig outer;
    outer.max_outer_iters = 6;
    const auto result =
        alternating_optimize(receiver, samples, outer, sebo, init, coders,
                             cfg.total_power, cfg.noise_power, StreamMode::rsma);
    for (std::size_t i = 1; i < result.trace.size(); ++i)
      ok = ok && result.trace[i] >= result.trace[i - 1] - 1e-8;
  }
  return check(out, "alternating-monotone", ok);
}

bool deterministic_runs(std::ostream& out) {
  ExperimentSpec spec;
  spec.scheme = Scheme::conv_rs_zf_svd;
  spec.scenario.switches = 5;
  spec.scenario.spatial_samples = 4;
  spec.scenario.saa_samples = 4;
  spec.scenario.seed = 9;
  spec.realizations = 4;
  spec.snr_sweep = {20.0};
  const std::string a = format_results(run_experiment(spec, 1));
  const std::string b = format_results(run_experiment(spec, 2));
  return check(out, "deterministic-results", a == b);
}

}  // namespace

bool selftest(std::ostream& out) {
  bool ok = true;
  ok &= path_equivalence(out);
  ok &= rate_wmmse_identity(out);
  ok &= sebo_exactness(out);
  ok &= monotone_alternating(out);
  ok &= deterministic_runs(out);
  out << (ok ? "selftest passed" : "selftest FAILED") << '\n';
  return ok;
}

}  // namespace pixel_rsma
