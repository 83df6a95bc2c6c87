// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_ANTENNA_CODER_HPP
#define PIXEL_RSMA_ANTENNA_CODER_HPP

#include <random>
#include <string>
#include <vector>

#include "pixel_rsma/errors.hpp"
#include "pixel_rsma/types.hpp"

namespace pixel_rsma {

/// Binary RF-switch state vector of a pixel antenna. Entry q = false means
/// switch on (short circuit, z_L = 0); entry q = true means switch off (open
/// circuit, z_L = infinite).
class AntennaCoder {
 public:
  AntennaCoder() = default;

  /// All switches shorted (the conventional fixed-pattern baseline).
  static AntennaCoder zeros(Index q) {
    AntennaCoder c;
    c.bits_.assign(static_cast<std::size_t>(q), false);
    return c;
  }

  static AntennaCoder from_bits(const std::vector<bool>& bits) {
    AntennaCoder c;
    c.bits_ = bits;
    return c;
  }

  /// Parses a string over {0,1}; character q maps to switch q.
  static AntennaCoder from_string(const std::string& s) {
    AntennaCoder c;
    c.bits_.reserve(s.size());
    for (char ch : s) {
      if (ch != '0' && ch != '1')
        throw InvalidArgument("antenna coder string must be over {0,1}");
      c.bits_.push_back(ch == '1');
    }
    return c;
  }

  template <typename Rng>
  static AntennaCoder random(Index q, Rng& rng) {
    std::bernoulli_distribution bit(0.5);
    AntennaCoder c;
    c.bits_.reserve(static_cast<std::size_t>(q));
    for (Index i = 0; i < q; ++i) c.bits_.push_back(bit(rng));
    return c;
  }

  Index size() const { return static_cast<Index>(bits_.size()); }
  bool open(Index q) const { return bits_[static_cast<std::size_t>(q)]; }
  void set(Index q, bool open) { bits_[static_cast<std::size_t>(q)] = open; }
  void flip(Index q) {
    bits_[static_cast<std::size_t>(q)] = !bits_[static_cast<std::size_t>(q)];
  }

  Index popcount() const {
    Index n = 0;
    for (bool b : bits_) n += b ? 1 : 0;
    return n;
  }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (bool b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  friend bool operator==(const AntennaCoder& a, const AntennaCoder& b) {
    return a.bits_ == b.bits_;
  }
  friend bool operator!=(const AntennaCoder& a, const AntennaCoder& b) {
    return !(a == b);
  }
  /// Lexicographic order on the bit string; used for deterministic
  /// tie-breaking (smallest coder wins).
  friend bool operator<(const AntennaCoder& a, const AntennaCoder& b) {
    return a.bits_ < b.bits_;
  }

 private:
  std::vector<bool> bits_;
};

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_ANTENNA_CODER_HPP
