// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "pixel_rsma/io.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pixel_rsma/errors.hpp"

namespace pixel_rsma {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, delim)) parts.push_back(trim(item));
  return parts;
}

void write_complex_matrix(std::ofstream& out, const MatrixXcd& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g %.17g", m(i, j).real(), m(i, j).imag());
      out << buf;
    }
    out << '\n';
  }
}

MatrixXcd read_complex_matrix(std::istream& in, Index rows, Index cols,
                              const std::string& what) {
  MatrixXcd m(rows, cols);
  std::string line;
  for (Index i = 0; i < rows; ++i) {
    if (!std::getline(in, line))
      throw IoError("antenna file truncated while reading " + what);
    std::istringstream row(line);
    for (Index j = 0; j < cols; ++j) {
      double re = 0.0;
      double im = 0.0;
      if (!(row >> re >> im))
        throw IoError("antenna file row has too few entries in " + what);
      m(i, j) = cxd(re, im);
    }
    double extra;
    if (row >> extra)
      throw IoError("antenna file row has too many entries in " + what);
  }
  return m;
}

}  // namespace

void save_antenna(const ImpedanceNetwork& net, const OpenCircuitPatterns& patterns,
                  const std::string& path) {
  if (patterns.port_count() != net.switch_count() + 1)
    throw DimensionMismatch("pattern ports must equal switch count + 1");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "pixel-antenna v1 Q=" << net.switch_count()
      << " Ns=" << patterns.spatial_samples() << '\n';
  write_complex_matrix(out, net.assembled());
  write_complex_matrix(out, patterns.patterns);
  if (!out) throw IoError("write failure on '" + path + "'");
}

std::pair<ImpedanceNetwork, OpenCircuitPatterns> load_antenna(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open antenna file '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) throw IoError("antenna file is empty");
  long long q = -1;
  long long ns = -1;
  if (std::sscanf(header.c_str(), "pixel-antenna v1 Q=%lld Ns=%lld", &q, &ns) != 2 ||
      q < 1 || ns < 1)
    throw IoError("bad antenna file header: '" + header + "'");

  const MatrixXcd z = read_complex_matrix(in, q + 1, q + 1, "impedance matrix");
  const MatrixXcd e = read_complex_matrix(in, 2 * ns, q + 1, "pattern matrix");

  const double scale = std::max(z.cwiseAbs().maxCoeff(), 1.0);
  if ((z - z.transpose()).cwiseAbs().maxCoeff() > 1e-6 * scale)
    throw IoError("impedance matrix is not symmetric (reciprocity violated)");
  const MatrixXd re = 0.5 * (z.real() + z.real().transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(re);
  if (eig.eigenvalues().minCoeff() < -1e-9 * scale)
    throw IoError("impedance matrix is not passive");

  ImpedanceNetwork net;
  net.antenna_self = z(0, 0);
  net.trans = z.col(0).tail(q);
  net.pixel_self = z.bottomRightCorner(q, q);
  OpenCircuitPatterns patterns;
  patterns.patterns = e;
  return {std::move(net), std::move(patterns)};
}

void save_codebook(const Codebook& codebook, const std::string& path) {
  if (codebook.size() < 1) throw InvalidArgument("cannot save an empty codebook");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "antenna-codebook v1 Q=" << codebook.switches() << " M=" << codebook.size()
      << '\n';
  for (const AntennaCoder& c : codebook.codewords) out << c.to_string() << '\n';
  if (!out) throw IoError("write failure on '" + path + "'");
}

Codebook load_codebook(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open codebook file '" + path + "'");
  std::string header;
  if (!std::getline(in, header)) throw IoError("codebook file is empty");
  long long q = -1;
  long long m = -1;
  if (std::sscanf(header.c_str(), "antenna-codebook v1 Q=%lld M=%lld", &q, &m) != 2 ||
      q < 1 || m < 1)
    throw IoError("bad codebook file header: '" + header + "'");
  Codebook codebook;
  codebook.codewords.reserve(static_cast<std::size_t>(m));
  std::string line;
  for (long long i = 0; i < m; ++i) {
    if (!std::getline(in, line)) throw IoError("codebook file truncated");
    const std::string word = trim(line);
    if (static_cast<long long>(word.size()) != q)
      throw IoError("codeword length does not match header Q");
    try {
      codebook.codewords.push_back(AntennaCoder::from_string(word));
    } catch (const InvalidArgument& err) {
      throw IoError(std::string("bad codeword: ") + err.what());
    }
  }
  return codebook;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

Config Config::parse_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (cfg.values_.count(key)) throw ConfigError(key, "duplicate key");
    cfg.values_[key] = value;
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "missing required key");
  return it->second;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + it->second + "'");
  }
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const long long v = std::stoll(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + it->second + "'");
  }
}

std::uint64_t Config::get_uint(const std::string& key,
                               std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an unsigned integer, got '" + it->second + "'");
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "1" || it->second == "true") return true;
  if (it->second == "0" || it->second == "false") return false;
  throw ConfigError(key, "expected 0/1/true/false, got '" + it->second + "'");
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& item : split(get_string(key), ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError(key, "expected a number list, got '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::vector<std::int64_t> Config::get_int_list(const std::string& key) const {
  std::vector<std::int64_t> out;
  for (const std::string& item : split(get_string(key), ',')) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw ConfigError(key, "expected an integer list, got '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key) const {
  std::vector<std::string> out = split(get_string(key), ',');
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const std::string& s) { return s.empty(); }),
            out.end());
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

void Config::require_known_keys(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : values_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(key, "unknown key");
  }
}

std::string format_results(const std::vector<ResultRow>& rows) {
  std::string out = "scheme,snr_db,M,Q,sum_rate,stderr,realizations,seed,wall_time_s\n";
  char buf[256];
  for (const ResultRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%lld,%lld,%.6f,%.6f,%lld,%llu,%.6f\n",
                  r.scheme.c_str(), r.snr_db, static_cast<long long>(r.codebook_size),
                  static_cast<long long>(r.switches), r.sum_rate, r.std_error,
                  static_cast<long long>(r.realizations),
                  static_cast<unsigned long long>(r.seed), r.wall_time_s);
    out += buf;
  }
  return out;
}

void write_results(const std::vector<ResultRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << format_results(rows);
  if (!out) throw IoError("write failure on '" + path + "'");
}

std::vector<ResultRow> read_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("results file is empty");
  if (trim(line) != "scheme,snr_db,M,Q,sum_rate,stderr,realizations,seed,wall_time_s")
    throw IoError("bad results header: '" + line + "'");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 9) throw IoError("bad results row: '" + line + "'");
    ResultRow r;
    try {
      r.scheme = fields[0];
      r.snr_db = std::stod(fields[1]);
      r.codebook_size = std::stoll(fields[2]);
      r.switches = std::stoll(fields[3]);
      r.sum_rate = std::stod(fields[4]);
      r.std_error = std::stod(fields[5]);
      r.realizations = std::stoll(fields[6]);
      r.seed = std::stoull(fields[7]);
      r.wall_time_s = std::stod(fields[8]);
    } catch (const std::exception&) {
      throw IoError("bad results row: '" + line + "'");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace pixel_rsma
