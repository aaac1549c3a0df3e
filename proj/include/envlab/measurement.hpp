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

/// The branches Σ_k a_k |k> of a system before any measurement, plus the
/// quality of the environmental records it will leave.
struct BranchSpec {
  SubsystemLabel system_label;
  std::size_t pointer_dimension = 2;
  Vector amplitudes;
  /// |<e_k|e_l>| for k != l; 0 means perfectly distinguishable records.
  double record_overlap = 0.0;

  /// Throws InvalidState / DimensionMismatch / BadOverlap.
  void validate() const;
  /// Σ_k a_k |k> on system_label.
  PureState system_state() const;
};

/// p(s_l | μ_k) for every memory outcome k; rows whose memory outcome has
/// probability below 1e-12 are undefined (NaN) and flagged.
struct ObserverOutcomeTable {
  std::vector<double> prior;
  Eigen::MatrixXd conditional;
  std::vector<double> memory_probability;
  std::vector<bool> defined;
};

/// True when `label` is in its index-0 ready state within 1e-10.
bool is_ready(const PureState& state, const SubsystemLabel& label);

/// |c>|t> -> |c>|t + c mod d_t>; c is the joint index over `control`.
PureState controlled_shift(const PureState& state, const LabelSet& control, const SubsystemLabel& target);

/// Record states e_0..e_{branches-1} (columns) in `dim` dimensions with
/// <e_k|e_l> = overlap for k != l and e_0 = |0>. Overlap 0 gives |k>.
Matrix record_states(std::size_t branches, std::size_t dim, double overlap);

/// |s_k>|A_0> -> |s_k>|A_k>. The apparatus must be ready and at least as
/// large as the system.
PureState premeasure(const PureState& state, const SubsystemLabel& system, const SubsystemLabel& apparatus);

/// Same controlled shift from the pointer onto a fresh environment.
PureState entangle_environment(const PureState& state, const SubsystemLabel& pointer,
                               const SubsystemLabel& environment);

/// Σ_k a_k |s_k>|A_k> ⊗_n |e_k^(n)>: each environment gets its own copy of the
/// pointer index, written into record states with the given pairwise overlap.
PureState broadcast_environment(const PureState& state, const SubsystemLabel& pointer,
                                const LabelSet& environments, double overlap);

/// Pairwise controlled shifts immediate[k] -> distant[k].
PureState cascade_environment(const PureState& state, const LabelSet& immediate, const LabelSet& distant);

/// Controlled shift from the system pointer basis onto a ready memory.
PureState observer_record(const PureState& state, const SubsystemLabel& system, const SubsystemLabel& memory);

ObserverOutcomeTable conditional_probability(const PureState& state, const SubsystemLabel& memory,
                                             const SubsystemLabel& system);

/// Header row "row,p_s0,...", then the prior row, then one row per memory
/// outcome "mu_k"; undefined rows print "undefined".
void write_csv(std::ostream& out, const ObserverOutcomeTable& table);

}  // namespace envlab
