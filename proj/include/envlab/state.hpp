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

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "envlab/layout.hpp"

namespace envlab {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Tolerances shared by every module.
namespace tol {
inline constexpr double kState = 1e-10;   // state/operator comparisons
inline constexpr double kKernel = 1e-12;  // kernel-level algebra
inline constexpr double kZero = 1e-12;    // eigenvalue / coefficient floor
}  // namespace tol

/// Normalized amplitude vector over a SpaceLayout.
class PureState {
 public:
  /// Throws LayoutMismatch on a length mismatch and InvalidState when the
  /// norm differs from 1 by more than 1e-10.
  PureState(SpaceLayout layout, Vector amplitudes);

  /// Computational basis state; `indices` holds one index per subsystem.
  static PureState basis(SpaceLayout layout, const std::vector<std::size_t>& indices);
  /// Single-subsystem state from (not necessarily normalized) amplitudes.
  static PureState single(const SubsystemLabel& label, const Vector& amplitudes);

  const SpaceLayout& layout() const noexcept { return layout_; }
  const Vector& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

 private:
  SpaceLayout layout_;
  Vector amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace operator over a layout.
class DensityOperator {
 public:
  /// Validating constructor; throws InvalidDensity.
  DensityOperator(SpaceLayout layout, Matrix matrix);

  static DensityOperator from_pure(const PureState& state);

  const SpaceLayout& layout() const noexcept { return layout_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  double purity() const { return (matrix_ * matrix_).trace().real(); }

 private:
  struct Unchecked {};
  DensityOperator(SpaceLayout layout, Matrix matrix, Unchecked) : layout_(std::move(layout)), matrix_(std::move(matrix)) {}
  friend DensityOperator partial_trace(const PureState&, const LabelSet&);
  friend DensityOperator partial_trace(const DensityOperator&, const LabelSet&);

  SpaceLayout layout_;
  Matrix matrix_;
};

/// Unitary acting on an ordered subset of subsystems. The matrix index is the
/// joint index over `targets` in the order listed.
class SubsystemUnitary {
 public:
  /// Throws NotUnitary when U U^† deviates from identity by more than 1e-10.
  SubsystemUnitary(LabelSet targets, Matrix matrix);

  const LabelSet& targets() const noexcept { return targets_; }
  const Matrix& matrix() const noexcept { return matrix_; }

 private:
  LabelSet targets_;
  Matrix matrix_;
};

/// state = Σ_k coefficients[k] |left_basis[k]> |right_basis[k]>, with only the
/// nonzero (> 1e-12) terms kept. Coefficients are descending; each left
/// vector's first nonzero amplitude is real and positive, and the right
/// vectors carry whatever phase makes the expansion exact.
struct SchmidtDecomposition {
  SpaceLayout left_layout;
  SpaceLayout right_layout;
  Eigen::VectorXd coefficients;
  Matrix left_basis;   // columns are |l_k>
  Matrix right_basis;  // columns are |r_k>

  std::size_t rank() const noexcept { return static_cast<std::size_t>(coefficients.size()); }
  /// Σ_k λ_k |l_k>|r_k> over left_layout ++ right_layout.
  Vector reconstruct() const;
};

struct RelativeState {
  Complex coefficient;
  /// Normalized partner on the complement, or nullopt when |coefficient| < 1e-12.
  std::optional<PureState> partner;
};

PureState tensor_product(const PureState& a, const PureState& b);

PureState apply_unitary(const PureState& state, const SubsystemUnitary& u);

/// Reduced operator on `keep`, whose subsystems appear in layout order.
DensityOperator partial_trace(const PureState& state, const LabelSet& keep);
DensityOperator partial_trace(const DensityOperator& rho, const LabelSet& keep);

SchmidtDecomposition schmidt_decompose(const PureState& state, const LabelSet& left);
/// Nonzero Schmidt coefficients only, descending (no basis vectors).
Eigen::VectorXd schmidt_coefficients(const PureState& state, const LabelSet& left);

/// Expansion Σ_k b_k |basis_k>|B_k> for a complete orthonormal basis on `left`
/// (columns of `basis`, over the left labels in layout order). Each partner's
/// first nonzero amplitude is real and positive; b_k carries the phase.
std::vector<RelativeState> relative_states(const PureState& state, const LabelSet& left, const Matrix& basis);

/// Same state with its subsystems permuted into `order` (a permutation of
/// the layout's labels).
PureState reorder(const PureState& state, const LabelSet& order);

/// min_θ ||a - e^{iθ} b||.
double global_phase_distance(const PureState& a, const PureState& b);
bool states_equal_up_to_global_phase(const PureState& a, const PureState& b, double tolerance = tol::kState);

/// Rescales so the first entry with magnitude above `floor` is real positive.
void fix_phase(Eigen::Ref<Vector> v, double floor = tol::kZero);

}  // namespace envlab
