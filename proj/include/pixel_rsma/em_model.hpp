// SPDX-License-Identifier: Apache-2.0
//
// pixel-rsma — multi-user MISO downlink simulator with switch-reconfigurable
// pixel antennas and rate-splitting multiple access.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#ifndef PIXEL_RSMA_EM_MODEL_HPP
#define PIXEL_RSMA_EM_MODEL_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "pixel_rsma/antenna_coder.hpp"
#include "pixel_rsma/errors.hpp"
#include "pixel_rsma/types.hpp"

namespace pixel_rsma {

/// Multiport impedance description of one pixel antenna: one antenna port and
/// Q switch-loaded pixel ports. Z_PP must be symmetric (reciprocity) and the
/// real part of the assembled (Q+1)x(Q+1) matrix positive semidefinite
/// (passivity); the synthetic generator enforces both.
template <typename Scalar>
struct ImpedanceNetworkT {
  Complex<Scalar> antenna_self;  // z_AA
  MatrixC<Scalar> pixel_self;    // Z_PP, Q x Q
  VectorC<Scalar> trans;         // z_PA, Q

  Index switch_count() const { return trans.size(); }

  /// Full (Q+1)x(Q+1) impedance matrix [z_AA, z_PA^T; z_PA, Z_PP].
  MatrixC<Scalar> assembled() const {
    const Index q = switch_count();
    MatrixC<Scalar> z(q + 1, q + 1);
    z(0, 0) = antenna_self;
    z.row(0).tail(q) = trans.transpose();
    z.col(0).tail(q) = trans;
    z.bottomRightCorner(q, q) = pixel_self;
    return z;
  }
};

/// Open-circuit radiation patterns of all ports. Column 0 is the antenna
/// port, columns 1..Q the pixel ports. Rows stack dual polarizations over
/// N_s spatial samples, so the row count is always even.
template <typename Scalar>
struct OpenCircuitPatternsT {
  MatrixC<Scalar> patterns;  // 2*N_s x (Q+1)

  Index spatial_samples() const { return patterns.rows() / 2; }
  Index port_count() const { return patterns.cols(); }
};

/// Truncated SVD factors of the open-circuit pattern matrix. The rank r is
/// the effective aerial degrees of freedom: the dimension of the receive
/// space a coded pattern can reach.
template <typename Scalar>
struct PatternBasisT {
  MatrixC<Scalar> left;             // U, 2*N_s x r, semi-unitary
  VectorR<Scalar> singular_values;  // diag(S), descending, strictly positive
  MatrixC<Scalar> right;            // V, (Q+1) x r, semi-unitary

  Index rank() const { return singular_values.size(); }
};

using ImpedanceNetwork = ImpedanceNetworkT<double>;
using OpenCircuitPatterns = OpenCircuitPatternsT<double>;
using PatternBasis = PatternBasisT<double>;

/// Port currents coded by an antenna coder, per the loaded multiport network
/// equations. Infinite loads are handled by port elimination: open ports are
/// removed from Z_PP before inversion and carry exactly zero current; closed
/// ports satisfy Z_PP,closed * i_closed = -z_PA,closed * i_A. Entry 0 of the
/// result is the antenna-port current i_A, and the whole vector is linear in
/// i_A by construction.
///
/// Throws SingularSubnetwork when the closed-port submatrix is singular
/// within relative tolerance 1e-12.
template <typename Scalar>
VectorC<Scalar> solve_port_currents(const ImpedanceNetworkT<Scalar>& net,
                                    const AntennaCoder& coder,
                                    Complex<Scalar> antenna_current) {
  const Index q = net.switch_count();
  if (coder.size() != q)
    throw DimensionMismatch("antenna coder length does not match switch count");
  if (!std::isfinite(antenna_current.real()) ||
      !std::isfinite(antenna_current.imag()))
    throw InvalidArgument("antenna-port current must be finite");

  std::vector<Index> closed;
  closed.reserve(static_cast<std::size_t>(q));
  for (Index i = 0; i < q; ++i)
    if (!coder.open(i)) closed.push_back(i);

  VectorC<Scalar> unit = VectorC<Scalar>::Zero(q + 1);
  unit(0) = Complex<Scalar>(1, 0);

  if (!closed.empty()) {
    const Index nc = static_cast<Index>(closed.size());
    MatrixC<Scalar> zcc(nc, nc);
    VectorC<Scalar> rhs(nc);
    for (Index a = 0; a < nc; ++a) {
      rhs(a) = -net.trans(closed[static_cast<std::size_t>(a)]);
      for (Index b = 0; b < nc; ++b)
        zcc(a, b) = net.pixel_self(closed[static_cast<std::size_t>(a)],
                                   closed[static_cast<std::size_t>(b)]);
    }
    Eigen::FullPivLU<MatrixC<Scalar>> lu(zcc);
    lu.setThreshold(Scalar(1e-12));
    if (lu.rank() < nc)
      throw SingularSubnetwork("closed-port impedance submatrix is singular");
    const VectorC<Scalar> ic = lu.solve(rhs);
    for (Index a = 0; a < nc; ++a)
      unit(closed[static_cast<std::size_t>(a)] + 1) = ic(a);
  }
  return unit * antenna_current;
}

/// Radiated pattern of a coded antenna: superposition of the port patterns
/// weighted by the port currents. Not normalized here.
template <typename DerivedE, typename DerivedI>
auto radiation_pattern(const Eigen::MatrixBase<DerivedE>& open_circuit,
                       const Eigen::MatrixBase<DerivedI>& currents) ->
    typename DerivedE::PlainObject {
  if (open_circuit.cols() != currents.size())
    throw DimensionMismatch("pattern columns must match current count");
  return open_circuit * currents;
}

template <typename Scalar>
VectorC<Scalar> radiation_pattern(const OpenCircuitPatternsT<Scalar>& patterns,
                                  const VectorC<Scalar>& currents) {
  return radiation_pattern(patterns.patterns, currents);
}

/// Truncated SVD of the open-circuit pattern matrix. Retains singular values
/// above tol * (largest singular value). Throws ZeroMatrix when the pattern
/// matrix has no nonzero singular value.
template <typename Scalar>
PatternBasisT<Scalar> pattern_basis(const OpenCircuitPatternsT<Scalar>& patterns,
                                    Scalar tol = Scalar(1e-6)) {
  if (!(tol > Scalar(0) && tol < Scalar(1)))
    throw InvalidArgument("SVD rank tolerance must lie in (0, 1)");
  Eigen::JacobiSVD<MatrixC<Scalar>> svd(patterns.patterns,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorR<Scalar>& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > Scalar(0)))
    throw ZeroMatrix("pattern matrix has no nonzero singular value");
  Index r = 0;
  while (r < sv.size() && sv(r) > tol * sv(0)) ++r;
  PatternBasisT<Scalar> basis;
  basis.left = svd.matrixU().leftCols(r);
  basis.singular_values = sv.head(r);
  basis.right = svd.matrixV().leftCols(r);
  return basis;
}

namespace detail {
template <typename Scalar>
VectorC<Scalar> unnormalized_pattern_coder(const PatternBasisT<Scalar>& basis,
                                           const VectorC<Scalar>& unit_currents) {
  if (basis.right.rows() != unit_currents.size())
    throw DimensionMismatch("basis port count does not match current count");
  // w = S V^T i^*  evaluated at i_A = 1.
  return basis.singular_values.asDiagonal() *
         (basis.right.transpose() * unit_currents.conjugate());
}
}  // namespace detail

/// Pattern coder of a coded antenna, normalized to unit Euclidean norm by the
/// choice of the antenna-port current. i_A is fixed real positive; all rates
/// are invariant to a common phase of the pattern coder. Returns nullopt when
/// the coder radiates nothing in the retained basis (norm below 1e-12).
template <typename Scalar>
std::optional<std::pair<VectorC<Scalar>, Complex<Scalar>>>
try_normalized_pattern_coder(const PatternBasisT<Scalar>& basis,
                             const ImpedanceNetworkT<Scalar>& net,
                             const AntennaCoder& coder) {
  const VectorC<Scalar> currents =
      solve_port_currents(net, coder, Complex<Scalar>(1, 0));
  const VectorC<Scalar> raw = detail::unnormalized_pattern_coder(basis, currents);
  const Scalar norm = raw.norm();
  if (norm < Scalar(1e-12)) return std::nullopt;
  const Complex<Scalar> antenna_current(Scalar(1) / norm, 0);
  return std::make_pair((raw / norm).eval(), antenna_current);
}

/// Throwing variant of try_normalized_pattern_coder; the optimizers use the
/// optional form and treat a zero pattern as a rate-0 coder.
template <typename Scalar>
std::pair<VectorC<Scalar>, Complex<Scalar>> normalized_pattern_coder(
    const PatternBasisT<Scalar>& basis, const ImpedanceNetworkT<Scalar>& net,
    const AntennaCoder& coder) {
  auto result = try_normalized_pattern_coder(basis, net, coder);
  if (!result)
    throw ZeroPattern("coder radiates nothing in the retained pattern basis");
  return *result;
}

/// Coded effective channel row h = w^H H_e.
template <typename DerivedW, typename DerivedH>
auto coded_channel_row(const Eigen::MatrixBase<DerivedW>& pattern_coder,
                       const Eigen::MatrixBase<DerivedH>& effective_channel)
    -> Eigen::Matrix<typename DerivedH::Scalar, 1, Eigen::Dynamic> {
  if (pattern_coder.size() != effective_channel.rows())
    throw DimensionMismatch("pattern coder length must match channel rows");
  return pattern_coder.adjoint() * effective_channel;
}

/// Receive-side hardware shared by all users: network, patterns, and the
/// pattern basis extracted from them.
template <typename Scalar>
class PixelReceiverT {
 public:
  PixelReceiverT() = default;
  PixelReceiverT(ImpedanceNetworkT<Scalar> net, OpenCircuitPatternsT<Scalar> patterns,
                 Scalar svd_tol = Scalar(1e-6))
      : net_(std::move(net)),
        patterns_(std::move(patterns)),
        basis_(pattern_basis(patterns_, svd_tol)) {
    if (patterns_.port_count() != net_.switch_count() + 1)
      throw DimensionMismatch("pattern ports must equal switch count + 1");
  }

  const ImpedanceNetworkT<Scalar>& network() const { return net_; }
  const OpenCircuitPatternsT<Scalar>& patterns() const { return patterns_; }
  const PatternBasisT<Scalar>& basis() const { return basis_; }
  Index switch_count() const { return net_.switch_count(); }
  Index rank() const { return basis_.rank(); }

  std::optional<VectorC<Scalar>> try_pattern_coder(const AntennaCoder& coder) const {
    auto result = try_normalized_pattern_coder(basis_, net_, coder);
    if (!result) return std::nullopt;
    return result->first;
  }

  VectorC<Scalar> pattern_coder(const AntennaCoder& coder) const {
    return normalized_pattern_coder(basis_, net_, coder).first;
  }

 private:
  ImpedanceNetworkT<Scalar> net_;
  OpenCircuitPatternsT<Scalar> patterns_;
  PatternBasisT<Scalar> basis_;
};

using PixelReceiver = PixelReceiverT<double>;

}  // namespace pixel_rsma

#endif  // PIXEL_RSMA_EM_MODEL_HPP
