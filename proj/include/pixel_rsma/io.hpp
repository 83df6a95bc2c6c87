// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_IO_HPP
#define PIXEL_RSMA_IO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pixel_rsma/codebook.hpp"
#include "pixel_rsma/em_model.hpp"

namespace pixel_rsma {

// --- Antenna data files -----------------------------------------------------
//
// Plain-text interchange format for measured or synthesized pixel antennas:
//   pixel-antenna v1 Q=<int> Ns=<int>
//   (Q+1) rows of the (Q+1)x(Q+1) impedance matrix
//   2*Ns rows of the 2*Ns x (Q+1) open-circuit pattern matrix
// with each complex entry written as `<re> <im>`. Loaders reject dimension
// mismatches, asymmetric pixel-port impedance blocks, and non-passive
// networks.

void save_antenna(const ImpedanceNetwork& net, const OpenCircuitPatterns& patterns,
                  const std::string& path);
std::pair<ImpedanceNetwork, OpenCircuitPatterns> load_antenna(
    const std::string& path);

// --- Codebook files ----------------------------------------------------------
//
//   antenna-codebook v1 Q=<int> M=<int>
//   one codeword per line as a length-Q string over {0,1}
// Save/load round-trips are bit-exact.

void save_codebook(const Codebook& codebook, const std::string& path);
Codebook load_codebook(const std::string& path);

// --- Key-value config files --------------------------------------------------
//
// One `key = value` pair per line; `#` starts a comment; blank lines ignored.

class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<std::int64_t> get_int_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  /// Throws ConfigError naming the first key outside the allowed set.
  void require_known_keys(const std::vector<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> values_;
};

// --- Result CSV ---------------------------------------------------------------

struct ResultRow {
  std::string scheme;
  double snr_db = 0.0;
  std::int64_t codebook_size = -1;  // -1 for non-codebook schemes
  std::int64_t switches = 0;
  double sum_rate = 0.0;
  double std_error = 0.0;
  std::int64_t realizations = 0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
};

/// Deterministic CSV rendering: fixed 6-decimal floats, header
/// `scheme,snr_db,M,Q,sum_rate,stderr,realizations,seed,wall_time_s`.
std::string format_results(const std::vector<ResultRow>& rows);
void write_results(const std::vector<ResultRow>& rows, const std::string& path);
std::vector<ResultRow> read_results(const std::string& path);

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_IO_HPP
