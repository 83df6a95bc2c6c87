// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_ERRORS_HPP
#define PIXEL_RSMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pixel_rsma {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix/vector dimensions do not agree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The closed-port impedance submatrix is singular within tolerance.
class SingularSubnetwork : public Error {
 public:
  using Error::Error;
};

/// All singular values of a pattern matrix vanish.
class ZeroMatrix : public Error {
 public:
  using Error::Error;
};

/// The coder radiates nothing in the retained pattern basis.
class ZeroPattern : public Error {
 public:
  using Error::Error;
};

/// A stacked channel matrix has rank below the user count; zero-forcing is
/// undefined.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

/// The convex precoder subproblem solver found no improving feasible step
/// within its iteration budget.
class SolverStall : public Error {
 public:
  using Error::Error;
};

/// Invalid function argument (precondition violation).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Bad or missing configuration; carries the offending key.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// A codebook scheme was requested without a codebook source.
class MissingCodebook : public ConfigError {
 public:
  explicit MissingCodebook(const std::string& what)
      : ConfigError("codebook_file", what) {}
};

/// File system or format failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_ERRORS_HPP
