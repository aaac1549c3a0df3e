// Copyright 2026 The envlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dense kernels on flattened multi-partite tensors. A tensor over factor
// dimensions `dims` is stored row-major: the first axis varies slowest.
// Everything here is generic in the Eigen scalar type.

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <vector>

namespace envlab::kernels {

using Eigen::Dynamic;
using Eigen::Index;

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Dynamic, Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Dynamic, 1>;

/// Flat-vector offset of every joint index over `axes`. The joint index is
/// enumerated with the first entry of `axes` slowest, so offsets[j] is the
/// contribution of joint value j. Offsets over disjoint axis sets add.
std::vector<Index> axis_offsets(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& axes);

std::size_t product_of(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& axes);

/// M(i, j) = flat[rows[i] + cols[j]].
template <typename Derived>
Mat<typename Derived::Scalar> gather(const Eigen::MatrixBase<Derived>& flat, const std::vector<Index>& rows,
                                     const std::vector<Index>& cols) {
  Mat<typename Derived::Scalar> out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (Index j = 0; j < out.cols(); ++j) {
    for (Index i = 0; i < out.rows(); ++i) out(i, j) = flat(rows[i] + cols[j]);
  }
  return out;
}

/// Inverse of gather: flat[rows[i] + cols[j]] = block(i, j).
template <typename Derived, typename Scalar>
void scatter(const Eigen::MatrixBase<Derived>& block, const std::vector<Index>& rows, const std::vector<Index>& cols,
             Vec<Scalar>& flat) {
  for (Index j = 0; j < block.cols(); ++j) {
    for (Index i = 0; i < block.rows(); ++i) flat(rows[i] + cols[j]) = block(i, j);
  }
}

/// Kronecker product; vectors are treated as one-column matrices.
template <typename A, typename B>
Mat<typename A::Scalar> kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  Mat<typename A::Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Reshape of a flat tensor into a (axes) x (complement) matrix.
template <typename Derived>
Mat<typename Derived::Scalar> matricize(const Eigen::MatrixBase<Derived>& flat, const std::vector<std::size_t>& dims,
                                        const std::vector<std::size_t>& row_axes,
                                        const std::vector<std::size_t>& col_axes) {
  return gather(flat, axis_offsets(dims, row_axes), axis_offsets(dims, col_axes));
}

/// (I ⊗ op ⊗ I) flat, with `op` acting on the joint index over `axes`.
template <typename Derived, typename OpDerived>
Vec<typename Derived::Scalar> apply_on_axes(const Eigen::MatrixBase<Derived>& flat, const std::vector<std::size_t>& dims,
                                            const std::vector<std::size_t>& axes,
                                            const Eigen::MatrixBase<OpDerived>& op,
                                            const std::vector<std::size_t>& rest_axes) {
  const auto target = axis_offsets(dims, axes);
  const auto rest = axis_offsets(dims, rest_axes);
  Vec<typename Derived::Scalar> out(flat.size());
  const Mat<typename Derived::Scalar> moved = op * gather(flat, target, rest);
  scatter(moved, target, rest, out);
  return out;
}

/// Reduced operator Tr_rest |v><v| on `keep_axes` (joint index in the order given).
template <typename Derived>
Mat<typename Derived::Scalar> reduce_pure(const Eigen::MatrixBase<Derived>& flat, const std::vector<std::size_t>& dims,
                                          const std::vector<std::size_t>& keep_axes,
                                          const std::vector<std::size_t>& discard_axes) {
  const Mat<typename Derived::Scalar> m = matricize(flat, dims, keep_axes, discard_axes);
  return m * m.adjoint();
}

/// Tr_discard of an operator on the full space.
template <typename Derived>
Mat<typename Derived::Scalar> reduce_operator(const Eigen::MatrixBase<Derived>& rho, const std::vector<std::size_t>& dims,
                                              const std::vector<std::size_t>& keep_axes,
                                              const std::vector<std::size_t>& discard_axes) {
  const auto keep = axis_offsets(dims, keep_axes);
  const auto discard = axis_offsets(dims, discard_axes);
  const auto n = static_cast<Index>(keep.size());
  Mat<typename Derived::Scalar> out = Mat<typename Derived::Scalar>::Zero(n, n);
  for (Index c = 0; c < n; ++c) {
    for (Index r = 0; r < n; ++r) {
      for (const Index d : discard) out(r, c) += rho(keep[r] + d, keep[c] + d);
    }
  }
  return out;
}

/// Largest entry of |U U^† - I|.
template <typename Derived>
typename Derived::RealScalar unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  using M = Mat<typename Derived::Scalar>;
  return (u * u.adjoint() - M::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

/// Largest entry of |A - A^†|.
template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

/// ½ Σ |eigenvalues(a - b)| for Hermitian a, b.
template <typename A, typename B>
typename A::RealScalar trace_distance(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  using M = Mat<typename A::Scalar>;
  const M diff = a - b;
  const M herm = (diff + diff.adjoint()) / typename A::RealScalar(2);
  Eigen::SelfAdjointEigenSolver<M> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum() / typename A::RealScalar(2);
}

/// Extends the orthonormal columns of `partial` to a full orthonormal basis
/// of dimension `dim` (modified Gram-Schmidt against the standard basis).
/// The leading columns of the result are exactly `partial`.
template <typename Derived>
Mat<typename Derived::Scalar> complete_orthonormal_basis(const Eigen::MatrixBase<Derived>& partial, Index dim) {
  using Scalar = typename Derived::Scalar;
  Mat<Scalar> basis(dim, dim);
  Index filled = partial.cols();
  basis.leftCols(filled) = partial;
  for (Index e = 0; e < dim && filled < dim; ++e) {
    Vec<Scalar> candidate = Vec<Scalar>::Unit(dim, e);
    // two passes keep the completion orthogonal to working precision
    for (int pass = 0; pass < 2; ++pass) {
      for (Index k = 0; k < filled; ++k) candidate -= basis.col(k).dot(candidate) * basis.col(k);
    }
    const auto norm = candidate.norm();
    if (norm > 1e-6) basis.col(filled++) = candidate / norm;
  }
  return basis;
}

/// Permutation |c>|t> -> |c>|t + c mod d_t>, where c is the joint index over
/// `control_axes` and t the index of `target_axis`.
template <typename Derived>
Vec<typename Derived::Scalar> controlled_shift(const Eigen::MatrixBase<Derived>& flat,
                                               const std::vector<std::size_t>& dims,
                                               const std::vector<std::size_t>& control_axes, std::size_t target_axis) {
  const auto control = axis_offsets(dims, control_axes);
  const auto target_dim = static_cast<Index>(dims[target_axis]);
  const auto target = axis_offsets(dims, {target_axis});
  std::vector<std::size_t> rest_axes;
  for (std::size_t a = 0; a < dims.size(); ++a) {
    bool used = a == target_axis;
    for (auto c : control_axes) used = used || c == a;
    if (!used) rest_axes.push_back(a);
  }
  const auto rest = axis_offsets(dims, rest_axes);
  Vec<typename Derived::Scalar> out(flat.size());
  for (std::size_t c = 0; c < control.size(); ++c) {
    const Index shift = static_cast<Index>(c) % target_dim;
    for (Index t = 0; t < target_dim; ++t) {
      const Index src = control[c] + target[t];
      const Index dst = control[c] + target[(t + shift) % target_dim];
      for (const Index r : rest) out(dst + r) = flat(src + r);
    }
  }
  return out;
}

}  // namespace envlab::kernels
