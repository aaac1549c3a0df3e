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

#include "envlab/envariance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "envlab/errors.hpp"
#include "envlab/kernels.hpp"
#include "envlab/measurement.hpp"

namespace envlab {

namespace {

Matrix phase_operator(const Matrix& frame, const std::vector<double>& phases) {
  if (static_cast<Eigen::Index>(phases.size()) != frame.cols()) {
    fail(ErrorCode::LengthMismatch, "need one phase per Schmidt term");
  }
  const auto n = frame.rows();
  Matrix u = Matrix::Identity(n, n) - frame * frame.adjoint();
  for (Eigen::Index k = 0; k < frame.cols(); ++k) {
    u += std::polar(1.0, phases[static_cast<std::size_t>(k)]) * frame.col(k) * frame.col(k).adjoint();
  }
  return u;
}

Matrix swap_operator(const Matrix& frame, Eigen::Index k, Eigen::Index l) {
  const auto n = frame.rows();
  Matrix p = Matrix::Identity(n, n);
  if (k == l) return p;
  const Vector a = frame.col(k), b = frame.col(l);
  p += -a * a.adjoint() - b * b.adjoint() + a * b.adjoint() + b * a.adjoint();
  return p;
}

SubsystemLabel fresh_label(const SpaceLayout& layout, std::string base) {
  while (layout.contains(base)) base += "'";
  return base;
}

/// The state with its ready `label` factor removed.
PureState drop_ready(const PureState& state, const SubsystemLabel& label) {
  const auto& layout = state.layout();
  const auto axis = layout.axis_of(label);
  const auto rest_axes = layout.complement_axes({axis});
  const Matrix slice = kernels::matricize(state.amplitudes(), layout.dims(), {axis}, rest_axes);
  return PureState(layout.select(rest_axes), slice.row(0).transpose());
}

}  // namespace

SubsystemUnitary schmidt_phase_unitary(const SchmidtDecomposition& sd, const std::vector<double>& phases) {
  return SubsystemUnitary(sd.left_layout.labels(), phase_operator(sd.left_basis, phases));
}

SubsystemUnitary environment_phase_unitary(const SchmidtDecomposition& sd, const std::vector<double>& phases) {
  return SubsystemUnitary(sd.right_layout.labels(), phase_operator(sd.right_basis, phases));
}

EnvarianceVerdict is_envariant(const PureState& state, const SubsystemUnitary& u, const LabelSet& environment_side) {
  const auto& layout = state.layout();
  const auto env_axes = layout.axes_of(environment_side);
  const auto sys_axes = layout.complement_axes(env_axes);
  if (env_axes.empty() || sys_axes.empty()) fail(ErrorCode::InvalidBipartition, "both sides must be non-empty");
  for (const auto& target : u.targets()) {
    if (std::find(environment_side.begin(), environment_side.end(), target) != environment_side.end()) {
      fail(ErrorCode::SideViolation, "'" + target.name() + "' is on the environment side");
    }
  }

  const auto dims = layout.dims();
  const PureState moved = apply_unitary(state, u);
  const Matrix rho_before = kernels::reduce_pure(state.amplitudes(), dims, sys_axes, env_axes);
  const Matrix rho_after = kernels::reduce_pure(moved.amplitudes(), dims, sys_axes, env_axes);

  EnvarianceVerdict verdict;
  verdict.system_trace_distance = kernels::trace_distance(rho_before, rho_after);
  if (verdict.system_trace_distance > tol::kState) {
    verdict.residual = std::numeric_limits<double>::quiet_NaN();
    verdict.reason = "reduced system operator changed; no environment action can restore it";
    return verdict;
  }

  // Both states purify the same system operator, so some W on the environment
  // maps one onto the other: Φ W = Ψ, solved as a unitary Procrustes problem.
  const Matrix psi = kernels::matricize(state.amplitudes(), dims, sys_axes, env_axes);
  const Matrix phi = kernels::matricize(moved.amplitudes(), dims, sys_axes, env_axes);
  Eigen::BDCSVD<Matrix> svd(phi.adjoint() * psi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix w = svd.matrixU() * svd.matrixV().adjoint();
  SubsystemUnitary undo(layout.select(env_axes).labels(), w.transpose());

  verdict.residual = global_phase_distance(apply_unitary(moved, undo), state);
  if (verdict.residual < tol::kState) {
    verdict.envariant = true;
    verdict.undo = std::move(undo);
    verdict.reason = "undone on the environment side";
  } else {
    verdict.reason = "environment-side undo did not restore the state";
  }
  return verdict;
}

EnvariantSwap envariant_swap(const PureState& state, std::size_t k, std::size_t l, const SchmidtDecomposition& sd) {
  if (k >= sd.rank() || l >= sd.rank()) fail(ErrorCode::BadIndex, "Schmidt term index out of range");
  const auto kk = static_cast<Eigen::Index>(k), ll = static_cast<Eigen::Index>(l);
  const SubsystemUnitary swap(sd.left_layout.labels(), swap_operator(sd.left_basis, kk, ll));
  return {apply_unitary(state, swap),
          SubsystemUnitary(sd.right_layout.labels(), swap_operator(sd.right_basis, kk, ll))};
}

std::vector<std::size_t> outcome_order(const SchmidtDecomposition& sd) {
  std::vector<Eigen::Index> dominant(sd.rank());
  for (Eigen::Index k = 0; k < sd.left_basis.cols(); ++k) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < sd.left_basis.rows(); ++i) {
      if (std::abs(sd.left_basis(i, k)) > std::abs(sd.left_basis(best, k)) + tol::kZero) best = i;
    }
    dominant[static_cast<std::size_t>(k)] = best;
  }
  std::vector<std::size_t> order(sd.rank());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dominant[a] < dominant[b]; });
  return order;
}

std::vector<double> schmidt_weights(const PureState& state, const LabelSet& system) {
  const auto sd = schmidt_decompose(state, system);
  std::vector<double> out;
  for (auto k : outcome_order(sd)) out.push_back(std::pow(sd.coefficients(static_cast<Eigen::Index>(k)), 2));
  return out;
}

std::vector<double> equal_amplitude_probabilities(const PureState& state, const LabelSet& system) {
  const Eigen::VectorXd coeffs = schmidt_coefficients(state, system);
  if (coeffs.maxCoeff() - coeffs.minCoeff() > tol::kState) {
    fail(ErrorCode::NotEqualAmplitude, "Schmidt coefficients differ; fine-grain first");
  }
  const auto n = static_cast<std::size_t>(coeffs.size());
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

double equal_amplitude_subset_probability(const PureState& state, const LabelSet& system,
                                          const std::vector<std::size_t>& terms) {
  const std::size_t n = equal_amplitude_probabilities(state, system).size();
  const std::set<std::size_t> distinct(terms.begin(), terms.end());
  if (distinct.size() != terms.size()) fail(ErrorCode::BadIndex, "terms must be distinct");
  if (!distinct.empty() && *distinct.rbegin() >= n) fail(ErrorCode::BadIndex, "term index out of range");
  // mutually exclusive, equally likely terms: n of N
  return static_cast<double>(terms.size()) / static_cast<double>(n);
}

FineGrainingPlan make_fine_graining_plan(const PureState& state, const LabelSet& system, const SubsystemLabel& ancilla,
                                         double tolerance, std::size_t m_cap) {
  const auto weights = schmidt_weights(state, system);
  for (std::size_t m = weights.size(); m <= m_cap; ++m) {
    std::vector<std::size_t> counts;
    std::size_t sum = 0;
    bool fits = true;
    for (double w : weights) {
      const auto c = static_cast<std::size_t>(std::llround(w * static_cast<double>(m)));
      if (c == 0 || std::abs(w - static_cast<double>(c) / static_cast<double>(m)) > tolerance) {
        fits = false;
        break;
      }
      counts.push_back(c);
      sum += c;
    }
    if (fits && sum == m) return {system, std::move(counts), m, ancilla, m, tolerance};
  }
  fail(ErrorCode::UseBoundsInstead, "no commensurate approximation with M <= " + std::to_string(m_cap));
}

PureState fine_grain(const PureState& state, const FineGrainingPlan& plan) {
  const auto& layout = state.layout();
  if (layout.dimension_of(plan.ancilla_label) < plan.total) {
    fail(ErrorCode::AncillaTooSmall, "ancilla has fewer than M basis states");
  }
  if (std::find(plan.system.begin(), plan.system.end(), plan.ancilla_label) != plan.system.end()) {
    fail(ErrorCode::InvalidArgument, "ancilla cannot be part of the system");
  }
  if (!is_ready(state, plan.ancilla_label)) fail(ErrorCode::ApparatusNotReady, "ancilla is not in its ready state");
  if (std::accumulate(plan.counts.begin(), plan.counts.end(), std::size_t{0}) != plan.total ||
      std::find(plan.counts.begin(), plan.counts.end(), std::size_t{0}) != plan.counts.end()) {
    fail(ErrorCode::PlanMismatch, "counts must be positive and sum to M");
  }

  const PureState core = drop_ready(state, plan.ancilla_label);
  const auto sd = schmidt_decompose(core, plan.system);
  const auto order = outcome_order(sd);
  if (order.size() != plan.counts.size()) fail(ErrorCode::PlanMismatch, "plan has the wrong number of outcomes");
  const double m = static_cast<double>(plan.total);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const double w = std::pow(sd.coefficients(static_cast<Eigen::Index>(order[i])), 2);
    if (std::abs(w - static_cast<double>(plan.counts[i]) / m) > plan.tolerance) {
      fail(ErrorCode::PlanMismatch, "counts do not match the squared amplitudes");
    }
  }
  const auto env_dim = static_cast<Eigen::Index>(sd.right_layout.total_dimension());
  if (env_dim < static_cast<Eigen::Index>(plan.total)) {
    fail(ErrorCode::DimensionMismatch, "environment has fewer than M basis states");
  }

  // Environment-side rotation |ε_k> -> m_k^{-1/2} Σ_{j in block k} |j>.
  Vector rotated = Vector::Zero(static_cast<Eigen::Index>(sd.left_layout.total_dimension()) * env_dim);
  Eigen::Index block_start = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(order[i]);
    const auto width = static_cast<Eigen::Index>(plan.counts[i]);
    Vector uniform = Vector::Zero(env_dim);
    uniform.segment(block_start, width).setConstant(1.0 / std::sqrt(static_cast<double>(width)));
    rotated += sd.coefficients(k) * kernels::kron(sd.left_basis.col(k), uniform);
    block_start += width;
  }
  const PureState ancilla = PureState::basis(SpaceLayout{{plan.ancilla_label, layout.dimension_of(plan.ancilla_label)}}, {0});
  const PureState extended =
      reorder(tensor_product(PureState(sd.left_layout.append(sd.right_layout), rotated), ancilla), layout.labels());
  return controlled_shift(extended, sd.right_layout.labels(), plan.ancilla_label);
}

std::vector<double> born_probabilities(const PureState& state, const LabelSet& system, double tolerance,
                                       std::size_t m_cap) {
  const auto& layout = state.layout();
  const SubsystemLabel ancilla = fresh_label(layout, "ancilla");
  auto plan = make_fine_graining_plan(state, system, ancilla, tolerance, m_cap);
  const auto sd = schmidt_decompose(state, system);
  const auto order = outcome_order(sd);

  // The environment needs room for M orthogonal records; if it is too small,
  // re-express the state with its Schmidt partners on a larger environment.
  PureState working = state;
  if (sd.right_layout.total_dimension() < plan.total) {
    const SubsystemLabel env = fresh_label(layout, "environment");
    const auto n = static_cast<Eigen::Index>(plan.total);
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(sd.left_layout.total_dimension()) * n);
    for (Eigen::Index k = 0; k < sd.coefficients.size(); ++k) {
      amps += sd.coefficients(k) * kernels::kron(sd.left_basis.col(k), Vector::Unit(n, k));
    }
    working = PureState(sd.left_layout.append(SpaceLayout{{env, plan.total}}), amps);
  }
  const PureState grained =
      fine_grain(tensor_product(working, PureState::basis(SpaceLayout{{ancilla, plan.total}}, {0})), plan);

  // Every term j (labelled by the ancilla) has the same amplitude, so each
  // carries probability 1/M; count the terms attached to each outcome.
  const auto& glayout = grained.layout();
  LabelSet branch_side = glayout.labels();
  branch_side.erase(std::find(branch_side.begin(), branch_side.end(), ancilla));
  const auto unit = equal_amplitude_probabilities(grained, branch_side);
  if (unit.size() != plan.total) fail(ErrorCode::PlanMismatch, "fine-grained state does not have M terms");

  const auto dims = glayout.dims();
  const auto anc_axis = glayout.axis_of(ancilla);
  const auto rest_axes = glayout.complement_axes({anc_axis});
  const SpaceLayout rest = glayout.select(rest_axes);
  const auto sys_in_rest = rest.axes_of(system);
  const auto others_in_rest = rest.complement_axes(sys_in_rest);
  const Matrix terms = kernels::matricize(grained.amplitudes(), dims, {anc_axis}, rest_axes);

  std::vector<std::size_t> tally(order.size(), 0);
  for (Eigen::Index j = 0; j < terms.rows(); ++j) {
    const Vector term = terms.row(j).transpose();
    if (term.squaredNorm() < tol::kZero) continue;
    const Matrix rho = kernels::reduce_pure(term, rest.dims(), sys_in_rest, others_in_rest) / term.squaredNorm();
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto s = sd.left_basis.col(static_cast<Eigen::Index>(order[i]));
      if (std::real(s.dot(rho * s)) > 0.5) {
        ++tally[i];
        break;
      }
    }
  }

  std::vector<double> p;
  const double m = static_cast<double>(plan.total);
  for (std::size_t i = 0; i < order.size(); ++i) {
    p.push_back(static_cast<double>(tally[i]) / m);
    const double w = std::pow(sd.coefficients(static_cast<Eigen::Index>(order[i])), 2);
    if (std::abs(p.back() - w) > tolerance + 1.0 / m) {
      fail(ErrorCode::PlanMismatch, "counted probability disagrees with the squared amplitude");
    }
  }
  return p;
}

PureState bounding_state(std::size_t count, std::size_t m) {
  if (m == 0 || count > m) fail(ErrorCode::InvalidArgument, "bounding state needs 0 <= count <= m");
  const double p = static_cast<double>(count) / static_cast<double>(m);
  Vector amps = Vector::Zero(4);
  amps(0) = std::sqrt(p);
  amps(3) = std::sqrt(1.0 - p);
  return PureState(SpaceLayout{{"S", 2}, {"E", 2}}, amps);
}

// Probabilities are taken to be continuous in the amplitudes; with that
// assumption the commensurate states at count/m and (count+1)/m bracket
// the probability of an incommensurate outcome.
ProbabilityBound rational_bounds(const PureState& state, const LabelSet& system, std::size_t m) {
  const auto weights = schmidt_weights(state, system);
  if (m < weights.size() || m == 0) fail(ErrorCode::MTooSmall, "M must be at least the number of outcomes");
  ProbabilityBound bound;
  bound.m_used = m;
  const double md = static_cast<double>(m);
  for (double w : weights) {
    const double scaled = w * md;
    auto lo = static_cast<std::size_t>(std::floor(scaled));
    auto hi = static_cast<std::size_t>(std::ceil(scaled));
    const double nearest = std::round(scaled);
    if (std::abs(scaled - nearest) <= 1e-9) lo = hi = static_cast<std::size_t>(nearest);
    for (auto count : {lo, hi}) {
      // each endpoint is realized by a commensurate comparison state
      if (count == 0 || count == m) continue;
      const auto witness = make_fine_graining_plan(bounding_state(count, m), {"S"}, "ancilla", 1e-12, m);
      if (static_cast<double>(witness.counts[0]) * md != static_cast<double>(count) * static_cast<double>(witness.total)) {
        fail(ErrorCode::PlanMismatch, "comparison state does not realize its endpoint");
      }
    }
    bound.lower_counts.push_back(lo);
    bound.upper_counts.push_back(hi);
    bound.lower.push_back(static_cast<double>(lo) / md);
    bound.upper.push_back(static_cast<double>(hi) / md);
  }
  return bound;
}

PhaseWitness phase_sensitivity_witness(const PureState& psi, const PureState& psi_prime) {
  if (!(psi.layout() == psi_prime.layout()) || psi.layout().size() != 1) {
    fail(ErrorCode::LayoutMismatch, "need two states of the same single subsystem");
  }
  const auto d = static_cast<Eigen::Index>(psi.layout().total_dimension());
  PhaseWitness w;
  // projectors onto (|a> + c|b>)/√2 for c in {1, -1, i, -i}
  const Complex relative[] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}};
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = a + 1; b < d; ++b) {
      for (const Complex c : relative) {
        Vector v = Vector::Zero(d);
        v(a) = 1.0 / std::sqrt(2.0);
        v(b) = c / std::sqrt(2.0);
        const double gap = std::abs(std::norm(v.dot(psi.amplitudes())) - std::norm(v.dot(psi_prime.amplitudes())));
        w.observable_expectation_gap = std::max(w.observable_expectation_gap, gap);
      }
    }
  }

  const SubsystemLabel system = psi.layout()[0].label;
  const SubsystemLabel env = fresh_label(psi.layout(), "E");
  const PureState ready = PureState::basis(SpaceLayout{{env, static_cast<std::size_t>(d)}}, {0});
  const auto recorded = [&](const PureState& s) {
    return partial_trace(entangle_environment(tensor_product(s, ready), system, env), {system}).matrix();
  };
  w.post_entanglement_gap = kernels::trace_distance(recorded(psi), recorded(psi_prime));
  return w;
}

}  // namespace envlab
