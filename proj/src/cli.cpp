// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <CLI11.hpp>
#include <iostream>

#include "pixel_rsma/harness.hpp"

namespace pixel_rsma {

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"pixel-rsma: pixel-antenna RSMA downlink simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  unsigned threads = 0;
  bool timings = false;

  CLI::App* run = app.add_subcommand("run", "run an experiment sweep to CSV");
  run->add_option("--config", config_path, "key = value scenario file")->required();
  run->add_option("--out", out_path, "output CSV path")->required();
  run->add_option("--threads", threads, "worker threads (default: env/auto)");
  run->add_flag("--timings", timings, "record wall times (breaks byte determinism)");

  std::string train_config;
  std::string train_out;
  CLI::App* train = app.add_subcommand("train-codebook",
                                       "train an antenna-coder codebook offline");
  train->add_option("--config", train_config, "key = value training file")->required();
  train->add_option("--out", train_out, "output codebook path")->required();

  CLI::App* self = app.add_subcommand("selftest", "run the built-in property suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (run->parsed()) {
      const Config config = Config::parse_file(config_path);
      std::vector<ResultRow> rows;
      for (const Scheme scheme : schemes_from_config(config)) {
        ExperimentSpec spec = experiment_from_config(config, scheme);
        spec.timings = timings;
        const auto scheme_rows = run_experiment(spec, threads);
        rows.insert(rows.end(), scheme_rows.begin(), scheme_rows.end());
      }
      write_results(rows, out_path);
      std::cout << "wrote " << rows.size() << " result rows to " << out_path << '\n';
      return 0;
    }
    if (train->parsed()) {
      const TrainingJob job = training_job_from_config(Config::parse_file(train_config));
      const LloydResult result = train_codebook(job, &std::cout);
      save_codebook(result.codebook, train_out);
      std::cout << "wrote codebook (M=" << result.codebook.size() << ") to "
                << train_out << '\n';
      return 0;
    }
    if (self->parsed()) return selftest(std::cout) ? 0 : 3;
  } catch (const ConfigError& err) {
    std::cerr << "pixel-rsma: " << err.what() << '\n';
    return 1;
  } catch (const IoError& err) {
    std::cerr << "pixel-rsma: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "pixel-rsma: internal error: " << err.what() << '\n';
    return 4;
  }
  return 0;
}

}  // namespace pixel_rsma
