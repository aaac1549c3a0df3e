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

#include "envlab/state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "envlab/errors.hpp"
#include "envlab/kernels.hpp"

namespace envlab {

namespace {

std::vector<std::size_t> ordered_axes(const SpaceLayout& layout, const LabelSet& labels) {
  std::vector<std::size_t> axes;
  axes.reserve(labels.size());
  for (const auto& label : labels) axes.push_back(layout.axis_of(label));
  auto sorted = axes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(ErrorCode::InvalidArgument, "label list contains a repeated label");
  }
  return axes;
}

Eigen::Index first_nonzero(const Vector& v, double floor) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > floor) return i;
  }
  return v.size();
}

/// True when no row of m has more than one nonzero entry, i.e. the columns
/// have pairwise disjoint supports.
bool columns_disjoint(const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    int nonzero = 0;
    for (Eigen::Index c = 0; c < m.cols() && nonzero < 2; ++c) nonzero += m(r, c) != Complex(0.0);
    if (nonzero > 1) return false;
  }
  return true;
}

/// Descending singular values. Orthogonal-support columns (or rows) need no
/// factorization: M^H M is then exactly diagonal.
Eigen::VectorXd singular_values(const Matrix& m) {
  Eigen::VectorXd sigma;
  if (columns_disjoint(m)) {
    sigma = m.colwise().norm().transpose();
  } else if (columns_disjoint(m.transpose())) {
    sigma = m.rowwise().norm();
  } else {
    return Eigen::BDCSVD<Matrix>(m).singularValues();
  }
  std::sort(sigma.begin(), sigma.end(), std::greater<>());
  return sigma;
}

}  // namespace

PureState::PureState(SpaceLayout layout, Vector amplitudes) : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != layout_.total_dimension()) {
    fail(ErrorCode::LayoutMismatch, "amplitude vector has length " + std::to_string(amplitudes_.size()) +
                                        " but layout dimension is " + std::to_string(layout_.total_dimension()));
  }
  const double norm = amplitudes_.norm();
  if (!(std::abs(norm - 1.0) <= tol::kState)) {
    fail(ErrorCode::InvalidState, "amplitudes have norm " + std::to_string(norm));
  }
}

PureState PureState::basis(SpaceLayout layout, const std::vector<std::size_t>& indices) {
  if (indices.size() != layout.size()) fail(ErrorCode::LengthMismatch, "one basis index per subsystem required");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= layout[i].dim) fail(ErrorCode::BadIndex, "basis index out of range");
    flat = flat * layout[i].dim + indices[i];
  }
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(layout.total_dimension()));
  amps(static_cast<Eigen::Index>(flat)) = 1.0;
  return PureState(std::move(layout), std::move(amps));
}

PureState PureState::single(const SubsystemLabel& label, const Vector& amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) fail(ErrorCode::InvalidState, "zero amplitude vector");
  return PureState(SpaceLayout{{label, static_cast<std::size_t>(amplitudes.size())}}, amplitudes / norm);
}

DensityOperator::DensityOperator(SpaceLayout layout, Matrix matrix) : layout_(std::move(layout)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(layout_.total_dimension());
  if (matrix_.rows() != n || matrix_.cols() != n) fail(ErrorCode::LayoutMismatch, "density matrix shape mismatch");
  if (kernels::hermiticity_defect(matrix_) > tol::kState) fail(ErrorCode::InvalidDensity, "matrix is not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0)) > tol::kState) fail(ErrorCode::InvalidDensity, "trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -tol::kState) fail(ErrorCode::InvalidDensity, "negative eigenvalue");
}

DensityOperator DensityOperator::from_pure(const PureState& state) {
  return DensityOperator(state.layout(), state.amplitudes() * state.amplitudes().adjoint(), Unchecked{});
}

SubsystemUnitary::SubsystemUnitary(LabelSet targets, Matrix matrix) : targets_(std::move(targets)), matrix_(std::move(matrix)) {
  if (targets_.empty()) fail(ErrorCode::InvalidArgument, "unitary needs at least one target");
  if (kernels::unitarity_defect(matrix_) > tol::kState) fail(ErrorCode::NotUnitary, "U U^† differs from identity");
}

Vector SchmidtDecomposition::reconstruct() const {
  Vector out = Vector::Zero(static_cast<Eigen::Index>(left_layout.total_dimension() * right_layout.total_dimension()));
  for (Eigen::Index k = 0; k < coefficients.size(); ++k) {
    out += coefficients(k) * kernels::kron(left_basis.col(k), right_basis.col(k));
  }
  return out;
}

PureState tensor_product(const PureState& a, const PureState& b) {
  SpaceLayout joined = a.layout().append(b.layout());
  return PureState(std::move(joined), kernels::kron(a.amplitudes(), b.amplitudes()));
}

PureState apply_unitary(const PureState& state, const SubsystemUnitary& u) {
  const auto& layout = state.layout();
  const auto axes = ordered_axes(layout, u.targets());
  const auto dims = layout.dims();
  if (static_cast<Eigen::Index>(kernels::product_of(dims, axes)) != u.matrix().rows()) {
    fail(ErrorCode::DimensionMismatch, "unitary size does not match its target subsystems");
  }
  auto sorted = axes;
  std::sort(sorted.begin(), sorted.end());
  Vector out = kernels::apply_on_axes(state.amplitudes(), dims, axes, u.matrix(), layout.complement_axes(sorted));
  return PureState(layout, std::move(out));
}

DensityOperator partial_trace(const PureState& state, const LabelSet& keep) {
  if (keep.empty()) fail(ErrorCode::EmptyKeepSet, "nothing to keep");
  const auto& layout = state.layout();
  const auto axes = layout.axes_of(keep);
  const auto rest = layout.complement_axes(axes);
  Matrix rho = kernels::reduce_pure(state.amplitudes(), layout.dims(), axes, rest);
  return DensityOperator(layout.select(axes), std::move(rho), DensityOperator::Unchecked{});
}

DensityOperator partial_trace(const DensityOperator& rho, const LabelSet& keep) {
  if (keep.empty()) fail(ErrorCode::EmptyKeepSet, "nothing to keep");
  const auto& layout = rho.layout();
  const auto axes = layout.axes_of(keep);
  const auto rest = layout.complement_axes(axes);
  Matrix reduced = kernels::reduce_operator(rho.matrix(), layout.dims(), axes, rest);
  return DensityOperator(layout.select(axes), std::move(reduced), DensityOperator::Unchecked{});
}

SchmidtDecomposition schmidt_decompose(const PureState& state, const LabelSet& left) {
  const auto& layout = state.layout();
  if (left.empty()) fail(ErrorCode::InvalidBipartition, "left side is empty");
  const auto left_axes = layout.axes_of(left);
  const auto right_axes = layout.complement_axes(left_axes);
  if (right_axes.empty()) fail(ErrorCode::InvalidBipartition, "right side is empty");

  const Matrix psi = kernels::matricize(state.amplitudes(), layout.dims(), left_axes, right_axes);
  Eigen::BDCSVD<Matrix> svd(psi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > tol::kZero) ++rank;

  Matrix lefts = svd.matrixU().leftCols(rank);
  Matrix rights = svd.matrixV().leftCols(rank).conjugate();
  Eigen::VectorXd coeffs = sigma.head(rank);

  // Within a degenerate block the frame is arbitrary: rotate it so the left
  // vectors form a lower-trapezoidal (echelon) set, which is canonical.
  for (Eigen::Index start = 0; start < rank;) {
    Eigen::Index stop = start + 1;
    while (stop < rank && coeffs(start) - coeffs(stop) <= tol::kState) ++stop;
    const Eigen::Index width = stop - start;
    if (width > 1) {
      Eigen::HouseholderQR<Matrix> qr(lefts.middleCols(start, width).adjoint());
      const Matrix w = qr.householderQ() * Matrix::Identity(width, width);
      lefts.middleCols(start, width) = lefts.middleCols(start, width) * w;
      rights.middleCols(start, width) = rights.middleCols(start, width) * w.conjugate();
    }
    start = stop;
  }

  for (Eigen::Index k = 0; k < rank; ++k) {
    const Eigen::Index i = first_nonzero(lefts.col(k), tol::kState);
    if (i == lefts.rows()) continue;
    const Complex phase = lefts(i, k) / std::abs(lefts(i, k));
    lefts.col(k) *= std::conj(phase);
    rights.col(k) *= phase;
  }

  // Descending coefficients; degenerate ties ordered by first nonzero index.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(rank));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(coeffs(a) - coeffs(b)) > tol::kState) return coeffs(a) > coeffs(b);
    return first_nonzero(lefts.col(a), tol::kState) < first_nonzero(lefts.col(b), tol::kState);
  });

  SchmidtDecomposition sd{layout.select(left_axes), layout.select(right_axes), Eigen::VectorXd(rank),
                          Matrix(lefts.rows(), rank), Matrix(rights.rows(), rank)};
  for (Eigen::Index k = 0; k < rank; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    sd.coefficients(k) = coeffs(src);
    sd.left_basis.col(k) = lefts.col(src);
    sd.right_basis.col(k) = rights.col(src);
  }
  return sd;
}

Eigen::VectorXd schmidt_coefficients(const PureState& state, const LabelSet& left) {
  const auto& layout = state.layout();
  if (left.empty()) fail(ErrorCode::InvalidBipartition, "left side is empty");
  const auto left_axes = layout.axes_of(left);
  const auto right_axes = layout.complement_axes(left_axes);
  if (right_axes.empty()) fail(ErrorCode::InvalidBipartition, "right side is empty");
  const Matrix psi = kernels::matricize(state.amplitudes(), layout.dims(), left_axes, right_axes);
  const Eigen::VectorXd sigma = singular_values(psi);
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > tol::kZero) ++rank;
  return sigma.head(rank);
}

std::vector<RelativeState> relative_states(const PureState& state, const LabelSet& left, const Matrix& basis) {
  const auto& layout = state.layout();
  if (left.empty()) fail(ErrorCode::InvalidBipartition, "left side is empty");
  const auto left_axes = layout.axes_of(left);
  const auto right_axes = layout.complement_axes(left_axes);
  if (right_axes.empty()) fail(ErrorCode::InvalidBipartition, "right side is empty");
  const auto dims = layout.dims();
  const auto left_dim = static_cast<Eigen::Index>(kernels::product_of(dims, left_axes));
  if (basis.rows() != left_dim || basis.cols() != left_dim) {
    fail(ErrorCode::BadBasis, "basis must be complete on the left factor");
  }
  if ((basis.adjoint() * basis - Matrix::Identity(left_dim, left_dim)).cwiseAbs().maxCoeff() > tol::kState) {
    fail(ErrorCode::BadBasis, "basis is not orthonormal");
  }

  const SpaceLayout partner_layout = layout.select(right_axes);
  const Matrix projected = basis.adjoint() * kernels::matricize(state.amplitudes(), dims, left_axes, right_axes);
  std::vector<RelativeState> out;
  out.reserve(static_cast<std::size_t>(left_dim));
  for (Eigen::Index k = 0; k < left_dim; ++k) {
    Vector w = projected.row(k).transpose();
    const double norm = w.norm();
    if (norm < tol::kZero) {
      out.push_back({Complex(norm), std::nullopt});
      continue;
    }
    w /= norm;
    const Eigen::Index i = first_nonzero(w, tol::kState);
    const Complex phase = w(i) / std::abs(w(i));
    w *= std::conj(phase);
    out.push_back({norm * phase, PureState(partner_layout, std::move(w))});
  }
  return out;
}

PureState reorder(const PureState& state, const LabelSet& order) {
  const auto& layout = state.layout();
  if (order.size() != layout.size()) fail(ErrorCode::LayoutMismatch, "reorder needs every label exactly once");
  const auto axes = ordered_axes(layout, order);
  const auto offsets = kernels::axis_offsets(layout.dims(), axes);
  Vector out(state.amplitudes().size());
  for (std::size_t j = 0; j < offsets.size(); ++j) out(static_cast<Eigen::Index>(j)) = state.amplitudes()(offsets[j]);
  return PureState(layout.select(axes), std::move(out));
}

double global_phase_distance(const PureState& a, const PureState& b) {
  if (!(a.layout() == b.layout())) fail(ErrorCode::LayoutMismatch, "states live on different layouts");
  const Complex overlap = b.amplitudes().dot(a.amplitudes());
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
  return (a.amplitudes() - phase * b.amplitudes()).norm();
}

bool states_equal_up_to_global_phase(const PureState& a, const PureState& b, double tolerance) {
  return global_phase_distance(a, b) <= tolerance;
}

void fix_phase(Eigen::Ref<Vector> v, double floor) {
  const Eigen::Index i = first_nonzero(v, floor);
  if (i == v.size()) return;
  v *= std::conj(v(i)) / std::abs(v(i));
}

}  // namespace envlab
