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

#include <optional>
#include <string>
#include <vector>

#include "envlab/state.hpp"

namespace envlab {

inline constexpr std::size_t kDefaultMCap = 10000;

/// Outcome of an envariance test of a system-side unitary.
struct EnvarianceVerdict {
  bool envariant = false;
  /// Environment-side unitary that restores the original state (when envariant).
  std::optional<SubsystemUnitary> undo;
  /// Distance, up to global phase, between the restored and the original state.
  /// NaN when no undo was attempted.
  double residual = 0.0;
  /// Trace distance between the system's reduced operator before and after u.
  double system_trace_distance = 0.0;
  std::string reason;
};

/// Commensurate fine-graining: outcome k is split into counts[k] equal
/// branches, total = Σ counts. Outcomes follow outcome_order().
struct FineGrainingPlan {
  LabelSet system;
  std::vector<std::size_t> counts;
  std::size_t total = 0;
  SubsystemLabel ancilla_label = "ancilla";
  std::size_t ancilla_dimension = 0;
  /// Allowed |λ_k^2 - counts[k] / total|.
  double tolerance = tol::kState;
};

/// Probability interval for every outcome from fixed-denominator rounding.
struct ProbabilityBound {
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t m_used = 0;
  /// Counts of the comparison states realizing each endpoint (numerator over m_used).
  std::vector<std::size_t> lower_counts;
  std::vector<std::size_t> upper_counts;
};

struct EnvariantSwap {
  PureState swapped;
  SubsystemUnitary counterswap;
};

struct PhaseWitness {
  double observable_expectation_gap = 0.0;
  double post_entanglement_gap = 0.0;
};

/// Σ_k e^{iφ_k} |s_k><s_k| on the left factor, identity on the rest of it.
SubsystemUnitary schmidt_phase_unitary(const SchmidtDecomposition& sd, const std::vector<double>& phases);
/// Same construction on the right (environment) Schmidt vectors.
SubsystemUnitary environment_phase_unitary(const SchmidtDecomposition& sd, const std::vector<double>& phases);

/// Decides whether `u` (acting away from `environment_side`) can be undone by
/// a unitary on `environment_side` alone. The verdict is false iff the
/// system's reduced operator moves by more than 1e-10 in trace distance;
/// otherwise an undo is built by aligning the environment frames of the two
/// purifications and checked on the global state.
EnvarianceVerdict is_envariant(const PureState& state, const SubsystemUnitary& u, const LabelSet& environment_side);

/// Swaps Schmidt terms k and l on the system side and returns the matching
/// environment-side counterswap.
EnvariantSwap envariant_swap(const PureState& state, std::size_t k, std::size_t l, const SchmidtDecomposition& sd);

/// Order in which Schmidt terms are reported as outcomes: by the basis index
/// where each system Schmidt vector has its largest amplitude (lowest index
/// on ties), so pointer-basis Schmidt vectors come out in pointer order.
std::vector<std::size_t> outcome_order(const SchmidtDecomposition& sd);

/// Squared Schmidt coefficients of the (system, rest) split, in outcome order.
std::vector<double> schmidt_weights(const PureState& state, const LabelSet& system);

/// 1/N per Schmidt term; NotEqualAmplitude unless all coefficients agree within 1e-10.
std::vector<double> equal_amplitude_probabilities(const PureState& state, const LabelSet& system);

/// Probability n/N that one of the n distinct listed terms occurs, for an
/// equal-amplitude state with N terms.
double equal_amplitude_subset_probability(const PureState& state, const LabelSet& system,
                                          const std::vector<std::size_t>& terms);

/// Smallest total M <= m_cap with |λ_k^2 - m_k/M| <= tolerance for every
/// outcome; UseBoundsInstead when none exists.
FineGrainingPlan make_fine_graining_plan(const PureState& state, const LabelSet& system,
                                         const SubsystemLabel& ancilla, double tolerance,
                                         std::size_t m_cap = kDefaultMCap);

/// Extends the environment so the state becomes M^{-1/2} Σ_j |s_k(j)>|ε_j>|j'>.
/// `state` holds the system, its environment (every other label) and a ready
/// ancilla. The environment is first rotated so that each Schmidt partner is
/// the uniform superposition over a block of counts[k] consecutive basis
/// states, then a c-shift copies the environment index onto the ancilla.
PureState fine_grain(const PureState& state, const FineGrainingPlan& plan);

/// Probabilities from counting equal-amplitude fine-grained branches.
std::vector<double> born_probabilities(const PureState& state, const LabelSet& system, double tolerance,
                                       std::size_t m_cap = kDefaultMCap);

/// Floor/ceiling bounds on every outcome probability with denominator m.
ProbabilityBound rational_bounds(const PureState& state, const LabelSet& system, std::size_t m);

/// √(count/m) |0>_S|0>_E + √(1 - count/m) |1>_S|1>_E: the commensurate
/// state used to pin one endpoint of a bound.
PureState bounding_state(std::size_t count, std::size_t m);

/// Interference contrast between two single-system states, and the trace
/// distance between their system operators once each has left a record in a
/// fresh environment.
PhaseWitness phase_sensitivity_witness(const PureState& psi, const PureState& psi_prime);

}  // namespace envlab
