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

#include "envlab/info.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "envlab/errors.hpp"
#include "envlab/format.hpp"
#include "envlab/kernels.hpp"

namespace envlab {

namespace {

bool overlaps(const LabelSet& a, const LabelSet& b) {
  return std::any_of(a.begin(), a.end(), [&](const SubsystemLabel& l) { return std::find(b.begin(), b.end(), l) != b.end(); });
}

void validate(const SpaceLayout& layout, const FragmentSpec& split) {
  if (split.system_labels.empty() || split.fragment_labels.empty()) {
    fail(ErrorCode::InvalidArgument, "system and fragment label sets must be non-empty");
  }
  layout.axes_of(split.system_labels);
  layout.axes_of(split.fragment_labels);
  if (overlaps(split.system_labels, split.fragment_labels)) {
    fail(ErrorCode::OverlappingSplit, "system and fragment share a subsystem");
  }
}

LabelSet joined(const LabelSet& a, const LabelSet& b) {
  LabelSet out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

double entropy_bits(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& eig = solver.eigenvalues();
  if (eig.size() > 0 && eig.minCoeff() < -tol::kState) fail(ErrorCode::InvalidDensity, "negative eigenvalue");
  double h = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (eig(i) > tol::kZero) h -= eig(i) * std::log2(eig(i));
  }
  return h;
}

double von_neumann_entropy(const DensityOperator& rho) { return entropy_bits(rho.matrix()); }

double mutual_information(const PureState& state, const FragmentSpec& split) {
  validate(state.layout(), split);
  const double hs = von_neumann_entropy(partial_trace(state, split.system_labels));
  const double hf = von_neumann_entropy(partial_trace(state, split.fragment_labels));
  const auto both = joined(split.system_labels, split.fragment_labels);
  // the joint entropy equals that of the complement for a pure global state
  const double hsf = both.size() == state.layout().size() ? 0.0 : von_neumann_entropy(partial_trace(state, both));
  const double mi = hs + hf - hsf;
  if (mi < -1e-9) fail(ErrorCode::InvalidState, "mutual information is negative beyond roundoff");
  return std::max(mi, 0.0);
}

RedundancyReport redundancy_report(const PureState& state, const LabelSet& system,
                                   const std::vector<LabelSet>& fragments) {
  for (std::size_t i = 0; i < fragments.size(); ++i) {
    if (overlaps(fragments[i], system)) fail(ErrorCode::OverlappingSplit, "fragment overlaps the system");
    for (std::size_t j = i + 1; j < fragments.size(); ++j) {
      if (overlaps(fragments[i], fragments[j])) fail(ErrorCode::OverlappingSplit, "fragments overlap");
    }
  }
  RedundancyReport report;
  report.system_entropy = von_neumann_entropy(partial_trace(state, system));
  if (report.system_entropy <= tol::kZero) fail(ErrorCode::UndefinedRatio, "system entropy is zero");
  report.per_fragment_mi.reserve(fragments.size());
  for (const auto& fragment : fragments) {
    report.per_fragment_mi.push_back(mutual_information(state, {system, fragment}));
    report.mi_sum += report.per_fragment_mi.back();
  }
  report.ratio = report.mi_sum / report.system_entropy;
  return report;
}

double basis_conditioned_mutual_information(const PureState& state, const FragmentSpec& split,
                                            const Matrix& fragment_basis) {
  const auto& layout = state.layout();
  validate(layout, split);
  const auto dims = layout.dims();
  const auto fragment_axes = layout.axes_of(split.fragment_labels);
  const auto rest_axes = layout.complement_axes(fragment_axes);
  const auto n = static_cast<Eigen::Index>(kernels::product_of(dims, fragment_axes));
  if (fragment_basis.rows() != n || fragment_basis.cols() != n) {
    fail(ErrorCode::BadBasis, "basis must be complete on the fragment");
  }
  if ((fragment_basis.adjoint() * fragment_basis - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol::kState) {
    fail(ErrorCode::BadBasis, "basis is not orthonormal");
  }

  // positions of the system axes among the remaining axes
  const SpaceLayout rest = layout.select(rest_axes);
  const auto rest_dims = rest.dims();
  const auto system_in_rest = rest.axes_of(split.system_labels);
  const auto others_in_rest = rest.complement_axes(system_in_rest);

  const double hs = von_neumann_entropy(partial_trace(state, split.system_labels));
  const Matrix branches = fragment_basis.adjoint() * kernels::matricize(state.amplitudes(), dims, fragment_axes, rest_axes);
  double conditional = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Vector w = branches.row(j).transpose();
    const double p = w.squaredNorm();
    if (p <= tol::kZero * tol::kZero) continue;
    const Matrix rho = kernels::reduce_pure(w, rest_dims, system_in_rest, others_in_rest) / p;
    conditional += p * entropy_bits(rho);
  }
  return std::clamp(hs - conditional, 0.0, hs);
}

void write_csv(std::ostream& out, const RedundancyReport& report) {
  out << "fragment_index,mi_bits,cumulative_bits,ratio\n";
  double cumulative = 0.0;
  for (std::size_t i = 0; i < report.per_fragment_mi.size(); ++i) {
    cumulative += report.per_fragment_mi[i];
    out << i << ',' << format_number(report.per_fragment_mi[i]) << ',' << format_number(cumulative) << ','
        << format_number(report.ratio) << '\n';
  }
}

Matrix fourier_basis(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix f(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index k = 0; k < m; ++k) {
      f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(n)),
                           2.0 * std::numbers::pi * static_cast<double>((j * k) % m) / static_cast<double>(n));
    }
  }
  return f;
}

}  // namespace envlab
