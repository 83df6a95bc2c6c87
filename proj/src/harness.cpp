// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "pixel_rsma/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include "pixel_rsma/parallel.hpp"
#include "pixel_rsma/rng.hpp"

namespace pixel_rsma {

namespace {

/// Training tuples live in a realization-label range disjoint from the
/// evaluation realizations.
constexpr std::uint64_t kTrainingLabelBase = std::uint64_t{1} << 62;

const std::vector<std::string> kRunKeys = {
    "scheme",         "N",
    "K",              "Q",
    "Ns",             "snr_db",
    "alpha",          "beta",
    "S",              "seed",
    "realizations",   "sebo_J",
    "sebo_I",         "sebo_flips",
    "sebo_restarts",  "outer_tol",
    "outer_max_iters", "inner_tol",
    "M",              "D",
    "train_S",        "lloyd_tol",
    "lloyd_max_iters", "codebook_file",
    "train_inline",   "antenna_file",
    "antenna_export", "online_max_passes",
};

const std::vector<std::string> kTrainKeys = {
    "N",         "K",        "Q",           "Ns",
    "snr_db",    "alpha",    "beta",        "S",
    "seed",      "sebo_J",   "sebo_I",      "sebo_flips",
    "sebo_restarts", "M",    "D",           "train_S",
    "lloyd_tol", "lloyd_max_iters", "mode", "antenna_file",
    "antenna_export",
};

ScenarioConfig scenario_from_config(const Config& config) {
  ScenarioConfig sc;
  sc.tx_antennas = config.get_int("N", 2);
  sc.users = config.get_int("K", 2);
  sc.switches = config.get_int("Q", 11);
  sc.spatial_samples = config.get_int("Ns", 16);
  sc.csit_alpha = config.get_double("alpha", 0.5);
  sc.error_scale = config.get_double("beta", 1.0);
  sc.saa_samples = config.get_int("S", 20);
  sc.seed = config.get_uint("seed", 1);
  sc.noise_power = 1.0;
  return sc;
}

SeboConfig sebo_from_config(const Config& config, Index switches) {
  SeboConfig sebo;
  sebo.block_size = config.get_int("sebo_J", std::min<Index>(8, switches));
  sebo.iterations = config.get_int("sebo_I", 5);
  sebo.flips_per_kick = config.get_int("sebo_flips", -1);  // -1: block size
  sebo.restarts = config.get_int("sebo_restarts", 2);
  return sebo;
}

// Codebook sizes come from the sweep handling (M may be a list there); the
// train-codebook path reads its scalar M separately.
CodebookTraining training_from_config(const Config& config,
                                      const ScenarioConfig& scenario) {
  CodebookTraining training;
  training.training_tuples = config.get_int("D", 200);
  training.saa_samples = config.get_int("train_S", scenario.saa_samples);
  training.tol = config.get_double("lloyd_tol", 1e-3);
  training.max_iters = config.get_int("lloyd_max_iters", 30);
  if (training.training_tuples < 1) throw ConfigError("D", "must be >= 1");
  if (training.saa_samples < 1) throw ConfigError("train_S", "must be >= 1");
  if (training.max_iters < 1) throw ConfigError("lloyd_max_iters", "must be >= 1");
  return training;
}

PixelReceiver build_receiver(const ScenarioConfig& scenario,
                             const std::string& antenna_file) {
  if (!antenna_file.empty()) {
    auto [net, patterns] = load_antenna(antenna_file);
    return PixelReceiver(std::move(net), std::move(patterns));
  }
  auto [net, patterns] = synth_pixel_hardware(scenario);
  return PixelReceiver(std::move(net), std::move(patterns));
}

std::string substitute_codebook_size(std::string path, Index m) {
  const std::string tag = "{M}";
  for (auto pos = path.find(tag); pos != std::string::npos; pos = path.find(tag))
    path.replace(pos, tag.size(), std::to_string(m));
  return path;
}

TrainingSet build_training_set(const PixelReceiver& receiver,
                               const ScenarioConfig& scenario,
                               const CodebookTraining& training) {
  ScenarioConfig cfg = scenario;
  cfg.saa_samples = training.saa_samples;
  TrainingSet set;
  set.reserve(static_cast<std::size_t>(training.training_tuples));
  for (Index d = 0; d < training.training_tuples; ++d) {
    const std::uint64_t label = kTrainingLabelBase + static_cast<std::uint64_t>(d);
    set.push_back(
        draw_sample_set(cfg, draw_effective_true(cfg, receiver.rank(), label), label));
  }
  return set;
}

LloydResult train_with_receiver(const PixelReceiver& receiver,
                                const TrainingJob& job, std::ostream* log) {
  const TrainingSet set = build_training_set(receiver, job.scenario, job.training);
  RateContext ctx;
  ctx.total_power = job.scenario.total_power;
  ctx.noise_power = job.scenario.noise_power;
  ctx.mode = job.mode;
  ctx.grid_points = job.grid_points;
  LloydResult result =
      lloyd_train(receiver, set, job.training.codebook_size, job.sebo, ctx,
                  job.training.tol, job.training.max_iters, job.scenario.seed);
  if (log) {
    for (std::size_t i = 0; i < result.trace.size(); ++i)
      *log << "lloyd iter=" << i << " avg_rate=" << result.trace[i] << '\n';
  }
  return result;
}

double run_realization(const ExperimentSpec& spec, const PixelReceiver& receiver,
                       const ScenarioConfig& cfg, const Codebook* codebook,
                       std::uint64_t realization) {
  const auto truths = draw_effective_true(cfg, receiver.rank(), realization);
  const auto samples = draw_sample_set(cfg, truths, realization);
  const StreamMode mode = scheme_mode(spec.scheme);

  if (scheme_is_codebook(spec.scheme)) {
    RateContext ctx;
    ctx.total_power = cfg.total_power;
    ctx.noise_power = cfg.noise_power;
    ctx.mode = mode;
    ctx.grid_points = spec.grid_points;
    const std::uint64_t select_seed = substream_seed(
        cfg.seed, {static_cast<std::uint64_t>(StreamKind::online_init), realization});
    return online_select(receiver, *codebook, samples, ctx,
                         spec.online_max_passes, select_seed)
        .report.objective;
  }

  std::vector<AntennaCoder> coders(static_cast<std::size_t>(cfg.users),
                                   AntennaCoder::zeros(cfg.switches));
  const CodedSamples coded = code_samples(receiver, samples, coders);
  const PrecoderMatrix init = scheme_precoder(
      coded.estimate_rows, cfg.total_power, cfg.noise_power, mode, spec.grid_points);

  if (spec.scheme == Scheme::conv_rs_zf_svd || spec.scheme == Scheme::conv_sdma_zf)
    return sample_average_rates(coded, init, cfg.noise_power).objective;

  SeboConfig sebo = spec.sebo;
  sebo.seed = substream_seed(
      cfg.seed, {static_cast<std::uint64_t>(StreamKind::sebo), realization});
  return alternating_optimize(receiver, samples, spec.outer, sebo, init,
                              std::move(coders), cfg.total_power, cfg.noise_power,
                              mode)
      .report.objective;
}

struct SweepPoint {
  double snr_db = 20.0;
  Index codebook_size = -1;
};

std::vector<SweepPoint> sweep_points(const ExperimentSpec& spec) {
  std::vector<double> snrs = spec.snr_sweep;
  if (snrs.empty()) snrs.push_back(spec.scenario.snr_db());
  std::vector<SweepPoint> points;
  if (scheme_is_codebook(spec.scheme)) {
    std::vector<Index> sizes = spec.codebook_sweep;
    if (sizes.empty()) sizes.push_back(spec.training.codebook_size);
    for (Index m : sizes)
      for (double snr : snrs) points.push_back({snr, m});
  } else {
    for (double snr : snrs) points.push_back({snr, -1});
  }
  return points;
}

}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::rsma_wmmse_sebo: return "rsma-wmmse-sebo";
    case Scheme::sdma_wmmse_sebo: return "sdma-wmmse-sebo";
    case Scheme::rsma_codebook_zf: return "rsma-codebook-zf";
    case Scheme::sdma_codebook_zf: return "sdma-codebook-zf";
    case Scheme::conv_rs_zf_svd: return "conv-rs-zf-svd";
    case Scheme::conv_sdma_zf: return "conv-sdma-zf";
  }
  return "unknown";
}

Scheme scheme_from_string(const std::string& name) {
  if (name == "rsma-wmmse-sebo") return Scheme::rsma_wmmse_sebo;
  if (name == "sdma-wmmse-sebo") return Scheme::sdma_wmmse_sebo;
  if (name == "rsma-codebook-zf") return Scheme::rsma_codebook_zf;
  if (name == "sdma-codebook-zf") return Scheme::sdma_codebook_zf;
  if (name == "conv-rs-zf-svd") return Scheme::conv_rs_zf_svd;
  if (name == "conv-sdma-zf") return Scheme::conv_sdma_zf;
  throw ConfigError("scheme", "unknown scheme '" + name + "'");
}

bool scheme_is_codebook(Scheme scheme) {
  return scheme == Scheme::rsma_codebook_zf || scheme == Scheme::sdma_codebook_zf;
}

StreamMode scheme_mode(Scheme scheme) {
  switch (scheme) {
    case Scheme::rsma_wmmse_sebo:
    case Scheme::rsma_codebook_zf:
    case Scheme::conv_rs_zf_svd:
      return StreamMode::rsma;
    default:
      return StreamMode::sdma;
  }
}

std::vector<Scheme> schemes_from_config(const Config& config) {
  std::vector<Scheme> schemes;
  for (const std::string& name : config.get_string_list("scheme"))
    schemes.push_back(scheme_from_string(name));
  return schemes;
}

ExperimentSpec experiment_from_config(const Config& config, Scheme scheme) {
  config.require_known_keys(kRunKeys);
  ExperimentSpec spec;
  spec.scheme = scheme;
  spec.scenario = scenario_from_config(config);
  spec.sebo = sebo_from_config(config, spec.scenario.switches);
  spec.outer.rel_tol = config.get_double("outer_tol", 1e-4);
  spec.outer.max_outer_iters = config.get_int("outer_max_iters", 50);
  spec.outer.inner_tol = config.get_double("inner_tol", 1e-5);
  spec.training = training_from_config(config, spec.scenario);
  spec.realizations = config.get_int("realizations", 100);
  spec.online_max_passes = config.get_int("online_max_passes", 10);
  spec.antenna_file = config.get_string("antenna_file", "");
  spec.antenna_export = config.get_string("antenna_export", "");
  spec.codebook_file = config.get_string("codebook_file", "");
  spec.train_inline = config.get_bool("train_inline", false);

  if (config.has("snr_db")) spec.snr_sweep = config.get_double_list("snr_db");
  if (config.has("M")) {
    for (std::int64_t m : config.get_int_list("M")) {
      if (m < 1) throw ConfigError("M", "codebook sizes must be >= 1");
      spec.codebook_sweep.push_back(m);
    }
  }
  if (spec.snr_sweep.size() > 1 && spec.codebook_sweep.size() > 1)
    throw ConfigError("snr_db", "only one sweep variable (snr_db or M) may be a list");
  if (!scheme_is_codebook(scheme) && spec.codebook_sweep.size() > 1)
    throw ConfigError("M", "codebook-size sweeps need a codebook scheme");

  if (!spec.snr_sweep.empty()) spec.scenario.set_snr_db(spec.snr_sweep.front());
  if (spec.realizations < 1) throw ConfigError("realizations", "must be >= 1");
  if (spec.outer.rel_tol <= 0) throw ConfigError("outer_tol", "must be > 0");
  if (spec.outer.max_outer_iters < 0)
    throw ConfigError("outer_max_iters", "must be >= 0");
  if (spec.outer.inner_tol <= 0) throw ConfigError("inner_tol", "must be > 0");
  spec.scenario.validate();
  try {
    spec.sebo.validate(spec.scenario.switches);
  } catch (const InvalidArgument& err) {
    throw ConfigError("sebo_J", err.what());
  }
  return spec;
}

TrainingJob training_job_from_config(const Config& config) {
  config.require_known_keys(kTrainKeys);
  TrainingJob job;
  job.scenario = scenario_from_config(config);
  if (config.has("snr_db")) job.scenario.set_snr_db(config.get_double("snr_db", 20.0));
  job.sebo = sebo_from_config(config, job.scenario.switches);
  job.training = training_from_config(config, job.scenario);
  job.training.codebook_size = config.get_int("M", 16);
  if (job.training.codebook_size < 1) throw ConfigError("M", "must be >= 1");
  const std::string mode = config.get_string("mode", "rsma");
  if (mode == "rsma")
    job.mode = StreamMode::rsma;
  else if (mode == "sdma")
    job.mode = StreamMode::sdma;
  else
    throw ConfigError("mode", "expected rsma or sdma, got '" + mode + "'");
  job.antenna_file = config.get_string("antenna_file", "");
  job.scenario.validate();
  try {
    job.sebo.validate(job.scenario.switches);
  } catch (const InvalidArgument& err) {
    throw ConfigError("sebo_J", err.what());
  }
  return job;
}

LloydResult train_codebook(const TrainingJob& job, std::ostream* log) {
  const PixelReceiver receiver = build_receiver(job.scenario, job.antenna_file);
  return train_with_receiver(receiver, job, log);
}

unsigned thread_count_from_env() {
  const char* env = std::getenv("PIXEL_RSMA_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || value < 1)
    throw ConfigError("PIXEL_RSMA_THREADS", "must be a positive integer");
  return static_cast<unsigned>(value);
}

namespace {

Codebook prepare_codebook(const ExperimentSpec& spec, const PixelReceiver& receiver,
                          const ScenarioConfig& cfg, Index codebook_size) {
  if (spec.train_inline) {
    TrainingJob job;
    job.scenario = cfg;
    job.sebo = spec.sebo;
    job.training = spec.training;
    job.training.codebook_size = codebook_size;
    job.mode = scheme_mode(spec.scheme);
    job.grid_points = spec.grid_points;
    return train_with_receiver(receiver, job, nullptr).codebook;
  }
  if (!spec.codebook_file.empty()) {
    Codebook codebook = load_codebook(
        substitute_codebook_size(spec.codebook_file, codebook_size));
    if (codebook.switches() != cfg.switches)
      throw IoError("codebook switch count does not match the scenario");
    return codebook;
  }
  throw MissingCodebook("codebook scheme needs codebook_file or train_inline = 1");
}

std::vector<double> point_objectives(const ExperimentSpec& spec,
                                     const PixelReceiver& receiver,
                                     const ScenarioConfig& cfg,
                                     const Codebook* codebook, unsigned threads) {
  std::vector<double> objectives(static_cast<std::size_t>(spec.realizations));
  parallel_for_index(objectives.size(), threads, [&](std::size_t i) {
    objectives[i] =
        run_realization(spec, receiver, cfg, codebook, static_cast<std::uint64_t>(i));
  });
  return objectives;
}

}  // namespace

std::vector<double> run_objectives(const ExperimentSpec& spec, unsigned threads) {
  spec.scenario.validate();
  if (spec.realizations < 1) throw ConfigError("realizations", "must be >= 1");
  const auto points = sweep_points(spec);
  if (points.size() != 1)
    throw ConfigError("snr_db", "run_objectives needs a single sweep point");
  if (threads == 0) threads = thread_count_from_env();

  const PixelReceiver receiver = build_receiver(spec.scenario, spec.antenna_file);
  ScenarioConfig cfg = spec.scenario;
  cfg.set_snr_db(points.front().snr_db);
  Codebook codebook;
  const Codebook* codebook_ptr = nullptr;
  if (scheme_is_codebook(spec.scheme)) {
    codebook = prepare_codebook(spec, receiver, cfg, points.front().codebook_size);
    codebook_ptr = &codebook;
  }
  return point_objectives(spec, receiver, cfg, codebook_ptr, threads);
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, unsigned threads) {
  spec.scenario.validate();
  if (spec.realizations < 1)
    throw ConfigError("realizations", "must be >= 1");
  if (threads == 0) threads = thread_count_from_env();

  const PixelReceiver receiver =
      build_receiver(spec.scenario, spec.antenna_file);
  if (!spec.antenna_export.empty())
    save_antenna(receiver.network(), receiver.patterns(), spec.antenna_export);

  std::vector<ResultRow> rows;
  for (const SweepPoint& point : sweep_points(spec)) {
    ScenarioConfig cfg = spec.scenario;
    cfg.set_snr_db(point.snr_db);

    Codebook codebook;
    const Codebook* codebook_ptr = nullptr;
    if (scheme_is_codebook(spec.scheme)) {
      codebook = prepare_codebook(spec, receiver, cfg, point.codebook_size);
      codebook_ptr = &codebook;
    }

    const auto start = std::chrono::steady_clock::now();
    const std::vector<double> objectives =
        point_objectives(spec, receiver, cfg, codebook_ptr, threads);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    double mean = 0.0;
    for (const double v : objectives) mean += v;
    mean /= static_cast<double>(objectives.size());
    double variance = 0.0;
    for (const double v : objectives) variance += (v - mean) * (v - mean);
    const double std_error =
        objectives.size() > 1
            ? std::sqrt(variance / static_cast<double>(objectives.size() - 1)) /
                  std::sqrt(static_cast<double>(objectives.size()))
            : 0.0;

    ResultRow row;
    row.scheme = to_string(spec.scheme);
    row.snr_db = point.snr_db;
    row.codebook_size = point.codebook_size;
    row.switches = cfg.switches;
    row.sum_rate = mean;
    row.std_error = std_error;
    row.realizations = spec.realizations;
    row.seed = cfg.seed;
    row.wall_time_s = spec.timings ? elapsed : 0.0;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pixel_rsma
