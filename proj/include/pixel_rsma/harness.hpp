// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_HARNESS_HPP
#define PIXEL_RSMA_HARNESS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pixel_rsma/codebook.hpp"
#include "pixel_rsma/io.hpp"
#include "pixel_rsma/wmmse.hpp"

namespace pixel_rsma {

enum class Scheme {
  rsma_wmmse_sebo,
  sdma_wmmse_sebo,
  rsma_codebook_zf,
  sdma_codebook_zf,
  conv_rs_zf_svd,
  conv_sdma_zf,
};

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& name);
bool scheme_is_codebook(Scheme scheme);
StreamMode scheme_mode(Scheme scheme);

/// Lloyd training parameters; saa_samples may differ from the evaluation
/// phase's.
struct CodebookTraining {
  Index codebook_size = 16;  // M
  Index training_tuples = 200;  // D
  Index saa_samples = 20;       // training-phase S
  double tol = 1e-3;
  Index max_iters = 30;
};

/// One experiment: a scheme swept over SNR points or codebook sizes,
/// averaged over independently seeded channel realizations.
struct ExperimentSpec {
  Scheme scheme = Scheme::rsma_wmmse_sebo;
  ScenarioConfig scenario;
  SeboConfig sebo;
  OuterLoopConfig outer;
  CodebookTraining training;
  std::vector<double> snr_sweep;       // exactly one sweep may be a list
  std::vector<Index> codebook_sweep;
  Index realizations = 100;
  Index grid_points = 101;
  Index online_max_passes = 10;
  std::string antenna_file;    // load hardware instead of synthesizing
  std::string antenna_export;  // save the hardware actually used
  std::string codebook_file;   // may contain {M}, substituted per sweep point
  bool train_inline = false;   // train codebooks instead of loading
  bool timings = false;        // fill wall_time_s (off: deterministic 0)
};

/// Builds an ExperimentSpec from a parsed config file; `scheme` comes from
/// the config's scheme key via the caller (configs may list several).
ExperimentSpec experiment_from_config(const Config& config, Scheme scheme);
std::vector<Scheme> schemes_from_config(const Config& config);

/// Runs every sweep point of the experiment, averaging the per-realization
/// sum-rate objectives into an ergodic mean and standard error. Realizations
/// run on a worker pool (threads = 0 reads PIXEL_RSMA_THREADS, then hardware
/// concurrency); outputs are byte-identical for any worker count.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec,
                                      unsigned threads = 0);

/// Per-realization sum-rate objectives for a single sweep point (the spec
/// must not sweep). Shares the realization seeding with run_experiment, so
/// paired scheme comparisons can difference these vectors element-wise.
std::vector<double> run_objectives(const ExperimentSpec& spec,
                                   unsigned threads = 0);

/// Offline codebook training job for the train-codebook command.
struct TrainingJob {
  ScenarioConfig scenario;
  SeboConfig sebo;
  CodebookTraining training;
  StreamMode mode = StreamMode::rsma;
  Index grid_points = 101;
  std::string antenna_file;
};

TrainingJob training_job_from_config(const Config& config);

/// Generates the seeded training set and runs Lloyd training; the trace is
/// streamed to `log` one average per line when given.
LloydResult train_codebook(const TrainingJob& job, std::ostream* log = nullptr);

/// Compact built-in property suite behind `pixel-rsma selftest`.
bool selftest(std::ostream& out);

/// CLI entry point; returns the process exit code (0 ok, 1 config error,
/// 2 I/O error, 3 failed selftest).
int cli_main(int argc, const char* const* argv);

unsigned thread_count_from_env();

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_HARNESS_HPP
