// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_TYPES_HPP
#define PIXEL_RSMA_TYPES_HPP

#include <Eigen/Core>
#include <complex>

namespace pixel_rsma {

using Index = Eigen::Index;

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using MatrixC = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorC = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVectorC = Eigen::Matrix<Complex<Scalar>, 1, Eigen::Dynamic>;
template <typename Scalar>
using MatrixR = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorR = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Double-precision working set used throughout the drivers.
using cxd = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using VectorXcd = Eigen::VectorXcd;
using RowVectorXcd = Eigen::RowVectorXcd;
using MatrixXd = Eigen::MatrixXd;
using VectorXd = Eigen::VectorXd;

/// Transmit precoder stack [p_c, p_1, ..., p_K]; column 0 carries the common
/// stream, columns 1..K the private streams. K = cols() - 1.
using PrecoderMatrix = Eigen::MatrixXcd;

/// Unit-norm pattern coder expressed in the SVD basis of the open-circuit
/// pattern matrix.
using PatternCoder = Eigen::VectorXcd;

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_TYPES_HPP
