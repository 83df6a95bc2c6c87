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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pixel_rsma/harness.hpp"
#include "pixel_rsma/rng.hpp"

using namespace pixel_rsma;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ExperimentSpec tiny_spec(Scheme scheme, std::uint64_t seed = 1) {
  ExperimentSpec spec;
  spec.scheme = scheme;
  spec.scenario.switches = 5;
  spec.scenario.spatial_samples = 4;
  spec.scenario.saa_samples = 4;
  spec.scenario.seed = seed;
  spec.realizations = 3;
  spec.snr_sweep = {20.0};
  spec.sebo.block_size = 5;
  spec.sebo.iterations = 1;
  spec.sebo.restarts = 1;
  spec.sebo.flips_per_kick = 0;
  spec.outer.max_outer_iters = 3;
  return spec;
}

}  // namespace

TEST_CASE("antenna files: save/load round trip preserves every entry") {
  ScenarioConfig cfg;
  cfg.switches = 4;
  cfg.spatial_samples = 3;
  cfg.seed = 11;
  auto [net, patterns] = synth_pixel_hardware(cfg);
  const std::string path = temp_path("pixel_rsma_antenna_test.txt");
  save_antenna(net, patterns, path);
  auto [net2, patterns2] = load_antenna(path);
  CHECK(net2.antenna_self == net.antenna_self);
  CHECK(net2.pixel_self == net.pixel_self);
  CHECK(net2.trans == net.trans);
  CHECK(patterns2.patterns == patterns.patterns);
  std::remove(path.c_str());
}

TEST_CASE("antenna files: malformed inputs are rejected") {
  const std::string path = temp_path("pixel_rsma_antenna_bad.txt");

  std::ofstream(path) << "pixel-antenna v2 Q=2 Ns=2\n";
  CHECK_THROWS_AS(load_antenna(path), IoError);

  // Truncated matrix body.
  std::ofstream(path) << "pixel-antenna v1 Q=2 Ns=2\n1 0 0 0 0 0\n";
  CHECK_THROWS_AS(load_antenna(path), IoError);

  // Asymmetric impedance block (reciprocity violation).
  {
    std::ofstream out(path);
    out << "pixel-antenna v1 Q=1 Ns=1\n";
    out << "1 0 2 0\n";
    out << "5 0 1 0\n";
    out << "1 0 0 0\n";
    out << "0 0 1 0\n";
  }
  CHECK_THROWS_AS(load_antenna(path), IoError);

  // Non-passive real part.
  {
    std::ofstream out(path);
    out << "pixel-antenna v1 Q=1 Ns=1\n";
    out << "-5 0 0 0\n";
    out << "0 0 1 0\n";
    out << "1 0 0 0\n";
    out << "0 0 1 0\n";
  }
  CHECK_THROWS_AS(load_antenna(path), IoError);
  std::remove(path.c_str());
}

TEST_CASE("codebook files: round trips are bit-exact and errors rejected") {
  Codebook cb;
  auto rng = make_rng(21, {});
  for (int m = 0; m < 5; ++m) cb.codewords.push_back(AntennaCoder::random(7, rng));
  const std::string path = temp_path("pixel_rsma_codebook_test.txt");
  save_codebook(cb, path);
  const std::string first = read_file(path);
  const Codebook loaded = load_codebook(path);
  CHECK(loaded.size() == cb.size());
  for (Index m = 0; m < cb.size(); ++m)
    CHECK(loaded.codewords[static_cast<std::size_t>(m)] ==
          cb.codewords[static_cast<std::size_t>(m)]);
  save_codebook(loaded, path);
  CHECK(read_file(path) == first);

  std::ofstream(path) << "antenna-codebook v1 Q=3 M=2\n010\n01\n";
  CHECK_THROWS_AS(load_codebook(path), IoError);
  std::ofstream(path) << "antenna-codebook v1 Q=3 M=2\n010\n012\n";
  CHECK_THROWS_AS(load_codebook(path), IoError);
  std::ofstream(path) << "antenna-codebook v1 Q=3 M=3\n010\n011\n";
  CHECK_THROWS_AS(load_codebook(path), IoError);
  std::remove(path.c_str());
}

TEST_CASE("result CSV: header, row counts, and parse round trip") {
  CHECK(format_results({}) ==
        "scheme,snr_db,M,Q,sum_rate,stderr,realizations,seed,wall_time_s\n");

  std::vector<ResultRow> rows(3);
  rows[0] = {"rsma-wmmse-sebo", 20.0, -1, 11, 10.123456789, 0.25, 100, 7, 1.5};
  rows[1] = {"conv-sdma-zf", -5.0, -1, 11, 0.5, 0.01, 100, 7, 0.0};
  rows[2] = {"rsma-codebook-zf", 20.0, 64, 11, 9.75, 0.125, 100, 7, 2.25};
  const std::string path = temp_path("pixel_rsma_results_test.csv");
  write_results(rows, path);

  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 4);

  const auto parsed = read_results(path);
  REQUIRE(parsed.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(parsed[i].scheme == rows[i].scheme);
    CHECK(parsed[i].snr_db == doctest::Approx(rows[i].snr_db).epsilon(1e-6));
    CHECK(parsed[i].codebook_size == rows[i].codebook_size);
    CHECK(parsed[i].sum_rate == doctest::Approx(rows[i].sum_rate).epsilon(1e-6));
    CHECK(parsed[i].std_error == doctest::Approx(rows[i].std_error).epsilon(1e-6));
  }
  std::remove(path.c_str());
}

TEST_CASE("run experiment: deterministic rows for any worker count") {
  const ExperimentSpec spec = tiny_spec(Scheme::conv_rs_zf_svd, 5);
  const std::string once = format_results(run_experiment(spec, 1));
  const std::string twice = format_results(run_experiment(spec, 1));
  const std::string threaded = format_results(run_experiment(spec, 3));
  CHECK(once == twice);
  CHECK(once == threaded);
}

TEST_CASE("run experiment: vanishing SNR gives vanishing ergodic rate") {
  for (const Scheme scheme : {Scheme::conv_rs_zf_svd, Scheme::conv_sdma_zf}) {
    ExperimentSpec spec = tiny_spec(scheme, 6);
    // alpha = 0 keeps the estimation-error power fixed while P_t -> 0.
    spec.scenario.csit_alpha = 0.0;
    spec.snr_sweep = {-30.0};
    spec.realizations = 5;
    const auto rows = run_experiment(spec, 2);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].sum_rate >= 0.0);
    CHECK(rows[0].sum_rate <= 0.01);
  }
}

TEST_CASE("run experiment: codebook schemes demand a codebook source") {
  ExperimentSpec spec = tiny_spec(Scheme::rsma_codebook_zf, 7);
  CHECK_THROWS_AS(run_experiment(spec, 1), MissingCodebook);
}

TEST_CASE("run experiment: exported hardware reloads to identical results") {
  const std::string path = temp_path("pixel_rsma_export.ant");
  ExperimentSpec spec = tiny_spec(Scheme::conv_rs_zf_svd, 9);
  spec.antenna_export = path;
  const std::string synthesized = format_results(run_experiment(spec, 1));
  spec.antenna_export.clear();
  spec.antenna_file = path;
  const std::string loaded = format_results(run_experiment(spec, 1));
  CHECK(synthesized == loaded);
  std::remove(path.c_str());
}

TEST_CASE("run experiment: wall time column stays zero unless requested") {
  ExperimentSpec spec = tiny_spec(Scheme::conv_sdma_zf, 8);
  const auto rows = run_experiment(spec, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].wall_time_s == 0.0);
  spec.timings = true;
  const auto timed = run_experiment(spec, 1);
  CHECK(timed[0].wall_time_s > 0.0);
}

TEST_CASE("experiment config: parsing, sweeps, and rejection rules") {
  const Config config = Config::parse_string(
      "scheme = rsma-wmmse-sebo, conv-sdma-zf\n"
      "N = 2\nK = 2\nQ = 7\nNs = 6\nsnr_db = 0, 10, 20\nalpha = 0.5\n"
      "S = 5\nseed = 9\nrealizations = 4\nsebo_J = 7\n");
  const auto schemes = schemes_from_config(config);
  REQUIRE(schemes.size() == 2);
  CHECK(schemes[0] == Scheme::rsma_wmmse_sebo);
  CHECK(schemes[1] == Scheme::conv_sdma_zf);
  const ExperimentSpec spec = experiment_from_config(config, schemes[0]);
  CHECK(spec.scenario.switches == 7);
  CHECK(spec.snr_sweep.size() == 3);
  CHECK(spec.sebo.effective_flips() == 7);  // defaults to the block size

  CHECK_THROWS_AS(
      experiment_from_config(
          Config::parse_string("scheme = rsma-codebook-zf\nbogus = 1\n"),
          Scheme::rsma_codebook_zf),
      ConfigError);
  CHECK_THROWS_AS(
      experiment_from_config(
          Config::parse_string(
              "scheme = rsma-codebook-zf\nsnr_db = 0,10\nM = 4,16\n"),
          Scheme::rsma_codebook_zf),
      ConfigError);
  CHECK_THROWS_AS(
      experiment_from_config(
          Config::parse_string("scheme = conv-sdma-zf\nM = 4,16\n"),
          Scheme::conv_sdma_zf),
      ConfigError);
  CHECK_THROWS_AS(schemes_from_config(Config::parse_string("scheme = magic\n")),
                  ConfigError);
}

TEST_CASE("codebook training job: deterministic files and monotone trace") {
  TrainingJob job;
  job.scenario.switches = 5;
  job.scenario.spatial_samples = 4;
  job.scenario.saa_samples = 3;
  job.scenario.seed = 12;
  job.sebo.block_size = 5;
  job.sebo.iterations = 1;
  job.sebo.restarts = 1;
  job.sebo.flips_per_kick = 0;
  job.training.codebook_size = 1;
  job.training.training_tuples = 3;
  job.training.saa_samples = 3;
  job.training.max_iters = 4;

  std::ostringstream log;
  const LloydResult result = train_codebook(job, &log);
  CHECK(result.codebook.size() == 1);
  CHECK(log.str().find("lloyd iter=0") != std::string::npos);
  for (std::size_t i = 1; i < result.trace.size(); ++i)
    CHECK(result.trace[i] >= result.trace[i - 1] - 1e-8);

  const std::string path = temp_path("pixel_rsma_cb_train.txt");
  save_codebook(result.codebook, path);
  const std::string first = read_file(path);
  // Re-running the job reproduces the file byte for byte.
  save_codebook(train_codebook(job, nullptr).codebook, path);
  CHECK(read_file(path) == first);

  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 2);  // header plus one codeword
  std::remove(path.c_str());
}

TEST_CASE("inline training matches the train-codebook command output") {
  TrainingJob job;
  job.scenario.switches = 5;
  job.scenario.spatial_samples = 4;
  job.scenario.saa_samples = 3;
  job.scenario.seed = 19;
  job.scenario.set_snr_db(20.0);
  job.sebo.block_size = 5;
  job.sebo.iterations = 1;
  job.sebo.restarts = 1;
  job.sebo.flips_per_kick = 0;
  job.training.codebook_size = 2;
  job.training.training_tuples = 3;
  job.training.saa_samples = 3;
  job.training.max_iters = 3;
  const std::string path = temp_path("pixel_rsma_cb_inline.txt");
  save_codebook(train_codebook(job, nullptr).codebook, path);

  ExperimentSpec spec = tiny_spec(Scheme::rsma_codebook_zf, 19);
  spec.scenario.saa_samples = 3;
  spec.training = job.training;
  spec.sebo = job.sebo;
  spec.codebook_sweep = {2};
  spec.realizations = 2;
  SUBCASE("from file") {
    spec.codebook_file = path;
    const auto rows = run_experiment(spec, 1);
    spec.codebook_file.clear();
    spec.train_inline = true;
    const auto inline_rows = run_experiment(spec, 1);
    CHECK(format_results(rows) == format_results(inline_rows));
  }
  std::remove(path.c_str());
}

TEST_CASE("thread env variable: parsed strictly") {
  unsetenv("PIXEL_RSMA_THREADS");
  CHECK(thread_count_from_env() == 0);
  setenv("PIXEL_RSMA_THREADS", "3", 1);
  CHECK(thread_count_from_env() == 3);
  setenv("PIXEL_RSMA_THREADS", "soup", 1);
  CHECK_THROWS_AS(thread_count_from_env(), ConfigError);
  unsetenv("PIXEL_RSMA_THREADS");
}

TEST_CASE("cli: exit codes map the error taxonomy") {
  const std::string missing = temp_path("pixel_rsma_does_not_exist.cfg");
  const char* argv_io[] = {"pixel-rsma", "run", "--config", missing.c_str(),
                           "--out", "/tmp/pixel_rsma_cli_out.csv"};
  CHECK(cli_main(6, argv_io) == 2);

  const std::string bad = temp_path("pixel_rsma_bad.cfg");
  std::ofstream(bad) << "scheme = rsma-wmmse-sebo\nbogus_key = 1\n";
  const char* argv_cfg[] = {"pixel-rsma", "run", "--config", bad.c_str(),
                            "--out", "/tmp/pixel_rsma_cli_out.csv"};
  CHECK(cli_main(6, argv_cfg) == 1);
  std::remove(bad.c_str());

  const char* argv_usage[] = {"pixel-rsma", "run"};
  CHECK(cli_main(2, argv_usage) == 1);
}

TEST_CASE("cli: run command writes the sweep CSV") {
  const std::string cfg_path = temp_path("pixel_rsma_cli_run.cfg");
  std::ofstream(cfg_path) << "scheme = conv-rs-zf-svd\nQ = 5\nNs = 4\nS = 3\n"
                          << "seed = 4\nrealizations = 2\nsnr_db = 0, 20\n";
  const std::string out_path = temp_path("pixel_rsma_cli_run.csv");
  const char* argv[] = {"pixel-rsma",    "run", "--config", cfg_path.c_str(),
                        "--out", out_path.c_str(), "--threads", "2"};
  CHECK(cli_main(8, argv) == 0);
  const auto rows = read_results(out_path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].snr_db == doctest::Approx(0.0));
  CHECK(rows[1].snr_db == doctest::Approx(20.0));
  CHECK(rows[1].sum_rate > rows[0].sum_rate);
  std::remove(cfg_path.c_str());
  std::remove(out_path.c_str());
}
