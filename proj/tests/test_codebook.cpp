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

#include <algorithm>
#include <cmath>
#include <set>

#include "pixel_rsma/codebook.hpp"
#include "pixel_rsma/rng.hpp"

using namespace pixel_rsma;

namespace {

struct CodebookFixture {
  PixelReceiver receiver;
  ScenarioConfig cfg;
  RateContext ctx;
};

CodebookFixture make_fixture(std::uint64_t seed, Index switches = 6,
                             double snr_db = 15.0) {
  ScenarioConfig cfg;
  cfg.switches = switches;
  cfg.spatial_samples = 4;
  cfg.saa_samples = 4;
  cfg.seed = seed;
  cfg.set_snr_db(snr_db);
  auto [net, patterns] = synth_pixel_hardware(cfg);
  RateContext ctx;
  ctx.total_power = cfg.total_power;
  ctx.noise_power = cfg.noise_power;
  return {PixelReceiver(std::move(net), std::move(patterns)), cfg, ctx};
}

ChannelSampleSet make_tuple(const CodebookFixture& fx, std::uint64_t label) {
  return draw_sample_set(fx.cfg, draw_effective_true(fx.cfg, fx.receiver.rank(), label),
                         label);
}

TrainingSet make_training_set(const CodebookFixture& fx, Index tuples) {
  TrainingSet set;
  for (Index d = 0; d < tuples; ++d)
    set.push_back(make_tuple(fx, 1000 + static_cast<std::uint64_t>(d)));
  return set;
}

AntennaCoder nth_coder(Index switches, std::uint64_t v) {
  AntennaCoder coder = AntennaCoder::zeros(switches);
  for (Index t = 0; t < switches; ++t) coder.set(t, ((v >> t) & 1u) != 0);
  return coder;
}

}  // namespace

TEST_CASE("codeword sum rate: vanishing power gives vanishing rate") {
  auto fx = make_fixture(1);
  fx.ctx.total_power = 1e-12;
  const auto tuple = make_tuple(fx, 0);
  const double rate =
      codeword_sum_rate(fx.receiver, AntennaCoder::zeros(fx.cfg.switches), tuple,
                        fx.ctx);
  CHECK(rate >= 0.0);
  CHECK(rate <= 1e-6);
}

TEST_CASE("codeword sum rate: depends on the codeword only through its pattern") {
  // With zero trans-impedance every coder produces the same port currents and
  // therefore the same pattern coder.
  ImpedanceNetwork net;
  net.antenna_self = cxd(2, 0);
  net.pixel_self = MatrixXcd::Identity(3, 3) * cxd(2, 0);
  net.trans = VectorXcd::Zero(3);
  auto rng = make_rng(2, {});
  OpenCircuitPatterns patterns;
  patterns.patterns = randcn_matrix(8, 4, 1.0, rng);
  CodebookFixture fx{PixelReceiver(net, patterns), ScenarioConfig{}, RateContext{}};
  fx.cfg.switches = 3;
  fx.cfg.spatial_samples = 4;
  fx.cfg.saa_samples = 3;
  fx.cfg.seed = 3;
  const auto tuple = make_tuple(fx, 0);
  const double a =
      codeword_sum_rate(fx.receiver, AntennaCoder::from_string("000"), tuple, fx.ctx);
  const double b =
      codeword_sum_rate(fx.receiver, AntennaCoder::from_string("101"), tuple, fx.ctx);
  CHECK(a == b);
}

TEST_CASE("lloyd partition: single codeword absorbs every tuple") {
  auto fx = make_fixture(3);
  const TrainingSet set = make_training_set(fx, 5);
  Codebook cb;
  cb.codewords = {AntennaCoder::zeros(fx.cfg.switches)};
  const auto cells = lloyd_partition(fx.receiver, cb, set, fx.ctx);
  CHECK(cells.size() == 1);
  CHECK(cells[0].size() == 5);
}

TEST_CASE("lloyd partition: duplicates resolve to the lowest index") {
  auto fx = make_fixture(4);
  const TrainingSet set = make_training_set(fx, 4);
  auto rng = make_rng(5, {});
  const AntennaCoder shared = AntennaCoder::random(fx.cfg.switches, rng);
  Codebook cb;
  cb.codewords = {shared, shared, AntennaCoder::random(fx.cfg.switches, rng)};
  const auto cells = lloyd_partition(fx.receiver, cb, set, fx.ctx);
  CHECK(cells[1].empty());
}

TEST_CASE("lloyd partition: matches a per-tuple exhaustive rescan") {
  auto fx = make_fixture(5);
  const TrainingSet set = make_training_set(fx, 8);
  auto rng = make_rng(6, {});
  Codebook cb;
  for (int m = 0; m < 4; ++m)
    cb.codewords.push_back(AntennaCoder::random(fx.cfg.switches, rng));
  const auto cells = lloyd_partition(fx.receiver, cb, set, fx.ctx);
  for (Index d = 0; d < 8; ++d) {
    Index best = 0;
    double best_rate = -1.0;
    for (Index j = 0; j < cb.size(); ++j) {
      const double rate =
          codeword_sum_rate(fx.receiver, cb.codewords[static_cast<std::size_t>(j)],
                            set[static_cast<std::size_t>(d)], fx.ctx);
      if (rate > best_rate) {
        best_rate = rate;
        best = j;
      }
    }
    const auto& cell = cells[static_cast<std::size_t>(best)];
    CHECK(std::find(cell.begin(), cell.end(), d) != cell.end());
  }
}

TEST_CASE("lloyd centroid: singleton cell with full-width SEBO is exhaustive") {
  auto fx = make_fixture(7);
  const TrainingSet set = make_training_set(fx, 1);
  Codebook cb;
  cb.codewords = {AntennaCoder::zeros(fx.cfg.switches)};
  SeboConfig sebo;
  sebo.block_size = fx.cfg.switches;
  sebo.iterations = 1;
  sebo.restarts = 1;
  sebo.flips_per_kick = 0;
  const Codebook updated = lloyd_centroid_update(fx.receiver, {{0}}, cb, set, sebo,
                                                 fx.ctx, 99);
  double brute = -1.0;
  for (std::uint64_t v = 0; v < (1u << fx.cfg.switches); ++v)
    brute = std::max(brute, codeword_sum_rate(fx.receiver,
                                              nth_coder(fx.cfg.switches, v),
                                              set[0], fx.ctx));
  CHECK(codeword_sum_rate(fx.receiver, updated.codewords[0], set[0], fx.ctx) ==
        doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("lloyd centroid: cell averages never decrease and no duplicates remain") {
  auto fx = make_fixture(8);
  const TrainingSet set = make_training_set(fx, 6);
  auto rng = make_rng(9, {});
  Codebook cb;
  for (int m = 0; m < 3; ++m)
    cb.codewords.push_back(AntennaCoder::random(fx.cfg.switches, rng));
  const auto cells = lloyd_partition(fx.receiver, cb, set, fx.ctx);
  SeboConfig sebo;
  sebo.block_size = 3;
  sebo.iterations = 1;
  sebo.restarts = 1;
  sebo.flips_per_kick = 0;
  const Codebook updated =
      lloyd_centroid_update(fx.receiver, cells, cb, set, sebo, fx.ctx, 17);

  auto cell_average = [&](const AntennaCoder& cw, const std::vector<Index>& cell) {
    double total = 0.0;
    for (Index d : cell)
      total += codeword_sum_rate(fx.receiver, cw, set[static_cast<std::size_t>(d)],
                                 fx.ctx);
    return total / static_cast<double>(cell.size());
  };
  for (std::size_t m = 0; m < cells.size(); ++m) {
    if (cells[m].empty()) continue;
    CHECK(cell_average(updated.codewords[m], cells[m]) >=
          cell_average(cb.codewords[m], cells[m]) - 1e-12);
  }
  std::set<std::string> words;
  for (const auto& cw : updated.codewords) words.insert(cw.to_string());
  CHECK(words.size() == updated.codewords.size());
}

TEST_CASE("lloyd training: full-coverage codebook reaches the per-tuple optimum") {
  auto fx = make_fixture(10, 3);
  const TrainingSet set = make_training_set(fx, 4);
  SeboConfig sebo;
  sebo.block_size = 3;
  sebo.iterations = 1;
  sebo.restarts = 1;
  sebo.flips_per_kick = 0;
  const LloydResult result =
      lloyd_train(fx.receiver, set, 8, sebo, fx.ctx, 1e-3, 10, 77);
  double optimum = 0.0;
  for (const auto& tuple : set) {
    double best = -1.0;
    for (std::uint64_t v = 0; v < 8; ++v)
      best = std::max(best,
                      codeword_sum_rate(fx.receiver, nth_coder(3, v), tuple, fx.ctx));
    optimum += best;
  }
  optimum /= static_cast<double>(set.size());
  CHECK(result.trace.back() == doctest::Approx(optimum).epsilon(1e-12));
  // All 8 distinct codewords over 3 switches are present.
  std::set<std::string> words;
  for (const auto& cw : result.codebook.codewords) words.insert(cw.to_string());
  CHECK(words.size() == 8);
}

TEST_CASE("lloyd training: degenerate single-codeword case and monotone traces") {
  auto fx = make_fixture(11);
  const TrainingSet set = make_training_set(fx, 5);
  SeboConfig sebo;
  sebo.block_size = 3;
  sebo.iterations = 2;
  sebo.flips_per_kick = 2;
  for (const Index m : {Index{1}, Index{4}}) {
    const LloydResult result =
        lloyd_train(fx.receiver, set, m, sebo, fx.ctx, 1e-3, 8, 31 + m);
    CHECK(result.codebook.size() == m);
    for (std::size_t i = 1; i < result.trace.size(); ++i)
      CHECK(result.trace[i] >= result.trace[i - 1] - 1e-8);
  }
}

TEST_CASE("online selection: single codeword forces one pass") {
  auto fx = make_fixture(12);
  Codebook cb;
  cb.codewords = {AntennaCoder::zeros(fx.cfg.switches)};
  const auto tuple = make_tuple(fx, 5);
  const OnlineSelection sel = online_select(fx.receiver, cb, tuple, fx.ctx, 10, 3);
  CHECK(sel.passes == 1);
  for (const auto& coder : sel.coders) CHECK(coder == cb.codewords[0]);
}

TEST_CASE("online selection: at most M evaluations per user per pass") {
  auto fx = make_fixture(13);
  auto rng = make_rng(14, {});
  Codebook cb;
  for (int m = 0; m < 5; ++m)
    cb.codewords.push_back(AntennaCoder::random(fx.cfg.switches, rng));
  const auto tuple = make_tuple(fx, 6);
  const OnlineSelection sel = online_select(fx.receiver, cb, tuple, fx.ctx, 10, 4);
  CHECK(!sel.scan_counts.empty());
  for (const Index count : sel.scan_counts) CHECK(count <= cb.size());
  for (std::size_t i = 1; i < sel.trace.size(); ++i)
    CHECK(sel.trace[i] >= sel.trace[i - 1] - 1e-12);
  CHECK(power_feasible(sel.precoders, fx.ctx.total_power));
}

TEST_CASE("online selection: superset codebooks dominate for a single user") {
  auto fx = make_fixture(15);
  fx.cfg.users = 1;
  const auto tuple = make_tuple(fx, 7);
  auto rng = make_rng(16, {});
  Codebook small;
  for (int m = 0; m < 3; ++m)
    small.codewords.push_back(AntennaCoder::random(fx.cfg.switches, rng));
  Codebook big = small;
  for (int m = 0; m < 3; ++m)
    big.codewords.push_back(AntennaCoder::random(fx.cfg.switches, rng));
  const double obj_small =
      online_select(fx.receiver, small, tuple, fx.ctx, 1, 5).report.objective;
  const double obj_big =
      online_select(fx.receiver, big, tuple, fx.ctx, 1, 5).report.objective;
  CHECK(obj_big >= obj_small - 1e-12);
}

TEST_CASE("online selection: full codebook attains the exhaustive optimum (K=1)") {
  auto fx = make_fixture(17, 5);
  fx.cfg.users = 1;
  const auto tuple = make_tuple(fx, 8);
  Codebook full;
  for (std::uint64_t v = 0; v < 32; ++v)
    full.codewords.push_back(nth_coder(5, v));
  double brute = -1.0;
  for (const auto& cw : full.codewords)
    brute = std::max(brute, codeword_sum_rate(fx.receiver, cw, tuple, fx.ctx));
  const OnlineSelection sel = online_select(fx.receiver, full, tuple, fx.ctx, 10, 6);
  CHECK(sel.report.objective == doctest::Approx(brute).epsilon(1e-12));
}
