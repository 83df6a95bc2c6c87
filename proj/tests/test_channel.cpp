// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "pixel_rsma/channel.hpp"
#include "pixel_rsma/errors.hpp"
#include "pixel_rsma/io.hpp"

using namespace pixel_rsma;

TEST_CASE("hardware synthesis is deterministic given the seed") {
  ScenarioConfig cfg;
  cfg.switches = 7;
  cfg.spatial_samples = 5;
  cfg.seed = 1234;
  auto [net_a, pat_a] = synth_pixel_hardware(cfg);
  auto [net_b, pat_b] = synth_pixel_hardware(cfg);
  CHECK(net_a.antenna_self == net_b.antenna_self);
  CHECK(net_a.pixel_self == net_b.pixel_self);
  CHECK(net_a.trans == net_b.trans);
  CHECK(pat_a.patterns == pat_b.patterns);
}

TEST_CASE("synthesized networks are reciprocal and passive") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    ScenarioConfig cfg;
    cfg.switches = 6;
    cfg.spatial_samples = 4;
    cfg.seed = seed;
    auto [net, patterns] = synth_pixel_hardware(cfg);
    CHECK((net.pixel_self - net.pixel_self.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(net.assembled().real());
    CHECK(eig.eigenvalues().minCoeff() >= -1e-12);
    CHECK(patterns.patterns.rows() % 2 == 0);
    CHECK(patterns.port_count() == cfg.switches + 1);
  }
}

TEST_CASE("error variance follows the CSIT quality scaling") {
  ScenarioConfig cfg;
  cfg.total_power = 100.0;
  cfg.error_scale = 1.0;
  cfg.csit_alpha = 0.0;
  CHECK(cfg.error_variance() == doctest::Approx(1.0));
  cfg.csit_alpha = 1.0;
  CHECK(cfg.error_variance() == doctest::Approx(0.01));
}

TEST_CASE("sample sets decompose exactly and reproduce deterministically") {
  ScenarioConfig cfg;
  cfg.users = 2;
  cfg.saa_samples = 6;
  cfg.seed = 5;
  const auto truths = draw_effective_true(cfg, 4, 17);
  const ChannelSampleSet a = draw_sample_set(cfg, truths, 17);
  const ChannelSampleSet b = draw_sample_set(cfg, truths, 17);
  for (Index k = 0; k < cfg.users; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    CHECK(a.estimates[uk] == b.estimates[uk]);
    for (Index s = 0; s < cfg.saa_samples; ++s) {
      const auto us = static_cast<std::size_t>(s);
      CHECK(a.realizations[uk][us] == b.realizations[uk][us]);
      // Bit-exact decomposition: realization = estimate + error.
      CHECK((a.realizations[uk][us] - a.estimates[uk] - a.errors[uk][us])
                .cwiseAbs()
                .maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("empirical error power matches the configured variance") {
  ScenarioConfig cfg;
  cfg.users = 1;
  cfg.saa_samples = 10000;
  cfg.csit_alpha = 0.0;
  cfg.error_scale = 0.5;  // per-entry variance 0.5
  cfg.seed = 31;
  const auto truths = draw_effective_true(cfg, 4, 0);
  const ChannelSampleSet set = draw_sample_set(cfg, truths, 0);
  double power = 0.0;
  std::size_t entries = 0;
  for (const MatrixXcd& err : set.errors[0]) {
    power += err.squaredNorm();
    entries += static_cast<std::size_t>(err.size());
  }
  const double empirical = power / static_cast<double>(entries);
  CHECK(empirical == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("effective channel derivation: zero and identity factors") {
  VirtualScenario scen;
  scen.virtual_channels = {MatrixXcd::Zero(4, 4)};
  scen.tx_patterns = MatrixXcd::Identity(4, 2);
  PatternBasis basis;
  basis.left = MatrixXcd::Identity(4, 4);
  basis.singular_values = VectorXd::Ones(4);
  basis.right = MatrixXcd::Identity(5, 4);
  CHECK(derive_effective_channel(scen, basis)[0].norm() == 0.0);

  auto rng = make_rng(3, {});
  scen.virtual_channels[0] = randcn_matrix(4, 4, 1.0, rng);
  scen.tx_patterns = MatrixXcd::Identity(4, 4);
  const auto effective = derive_effective_channel(scen, basis);
  CHECK((effective[0] - scen.virtual_channels[0]).norm() <= 1e-14);

  scen.tx_patterns = MatrixXcd::Identity(3, 2);
  CHECK_THROWS_AS(derive_effective_channel(scen, basis), DimensionMismatch);
}

TEST_CASE("transmit pattern columns are unit norm") {
  ScenarioConfig cfg;
  cfg.tx_antennas = 3;
  cfg.spatial_samples = 5;
  cfg.seed = 77;
  const VirtualScenario scen = synth_virtual_scenario(cfg, 2);
  for (Index j = 0; j < scen.tx_patterns.cols(); ++j)
    CHECK(std::abs(scen.tx_patterns.col(j).norm() - 1.0) <= 1e-12);
}

TEST_CASE("scenario config validation names the offending key") {
  ScenarioConfig cfg;
  cfg.users = 0;
  try {
    cfg.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(err.key() == "K");
  }
  cfg = ScenarioConfig{};
  cfg.csit_alpha = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("snr round trip") {
  ScenarioConfig cfg;
  cfg.set_snr_db(17.5);
  CHECK(cfg.snr_db() == doctest::Approx(17.5));
  CHECK(cfg.total_power == doctest::Approx(std::pow(10.0, 1.75)));
}

TEST_CASE("config files: parsing, comments, errors") {
  const Config cfg = Config::parse_string(
      "# scenario\nN = 4\nsnr_db = 0, 10 ,20\nname = hello # trailing\n");
  CHECK(cfg.get_int("N", 0) == 4);
  CHECK(cfg.get_double_list("snr_db") == std::vector<double>{0.0, 10.0, 20.0});
  CHECK(cfg.get_string("name") == "hello");
  CHECK(cfg.get_int("missing", 7) == 7);

  CHECK_THROWS_AS(Config::parse_string("just-a-line\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse_string("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(cfg.get_int("name", 0), ConfigError);
  CHECK_THROWS_AS(cfg.require_known_keys({"N", "snr_db"}), ConfigError);
}
