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

#include <iosfwd>
#include <vector>

#include "envlab/state.hpp"

namespace envlab {

/// A system / fragment split of one state. Both sets are non-empty and disjoint.
struct FragmentSpec {
  LabelSet system_labels;
  LabelSet fragment_labels;
};

/// Mutual information of the system with each fragment, in bits.
struct RedundancyReport {
  std::vector<double> per_fragment_mi;
  double mi_sum = 0.0;
  double system_entropy = 0.0;
  double ratio = 0.0;  // mi_sum / system_entropy
};

/// -Σ λ log2 λ over eigenvalues above 1e-12.
double von_neumann_entropy(const DensityOperator& rho);

/// Entropy of a Hermitian matrix already known to be a density operator.
/// Throws InvalidDensity on an eigenvalue below -1e-10.
double entropy_bits(const Matrix& rho);

/// H(S) + H(F) - H(S,F), clamped at zero.
double mutual_information(const PureState& state, const FragmentSpec& split);

/// Sum of I(system : fragment_n) over fragments, and its ratio to H(system).
/// This is the mutual-information redundancy ratio; UndefinedRatio when the
/// system entropy is below 1e-12.
RedundancyReport redundancy_report(const PureState& state, const LabelSet& system,
                                   const std::vector<LabelSet>& fragments);

/// Information about the system extractable by measuring the fragment in
/// `fragment_basis` (columns, over the fragment labels in layout order):
/// H(S) - Σ_j p_j H(S | outcome j).
double basis_conditioned_mutual_information(const PureState& state, const FragmentSpec& split,
                                            const Matrix& fragment_basis);

/// CSV with columns fragment_index, mi_bits, cumulative_bits, ratio.
void write_csv(std::ostream& out, const RedundancyReport& report);

/// Unitary discrete Fourier basis (columns) of dimension n; Hadamard for n = 2.
Matrix fourier_basis(std::size_t n);

}  // namespace envlab
