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

#include "envlab/measurement.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "envlab/errors.hpp"
#include "envlab/format.hpp"
#include "envlab/kernels.hpp"

namespace envlab {

namespace {

void require_ready(const PureState& state, const SubsystemLabel& label) {
  if (!is_ready(state, label)) fail(ErrorCode::ApparatusNotReady, "'" + label.name() + "' is not in its ready state");
}

void require_capacity(const PureState& state, const SubsystemLabel& source, const SubsystemLabel& target) {
  if (source == target) fail(ErrorCode::InvalidArgument, "source and target must differ");
  const auto& layout = state.layout();
  if (layout.dimension_of(target) < layout.dimension_of(source)) {
    fail(ErrorCode::DimensionMismatch, "'" + target.name() + "' is smaller than '" + source.name() + "'");
  }
}

PureState copy_pointer(const PureState& state, const SubsystemLabel& source, const SubsystemLabel& target) {
  require_capacity(state, source, target);
  require_ready(state, target);
  return controlled_shift(state, {source}, target);
}

}  // namespace

void BranchSpec::validate() const {
  if (pointer_dimension < 2) fail(ErrorCode::DimensionMismatch, "pointer dimension must be at least 2");
  if (static_cast<std::size_t>(amplitudes.size()) != pointer_dimension) {
    fail(ErrorCode::DimensionMismatch, "need one amplitude per pointer state");
  }
  if (std::abs(amplitudes.norm() - 1.0) > tol::kState) fail(ErrorCode::InvalidState, "amplitudes are not normalized");
  if (!(record_overlap >= 0.0 && record_overlap <= 1.0)) fail(ErrorCode::BadOverlap, "record overlap must lie in [0, 1]");
}

PureState BranchSpec::system_state() const {
  validate();
  return PureState(SpaceLayout{{system_label, pointer_dimension}}, amplitudes);
}

bool is_ready(const PureState& state, const SubsystemLabel& label) {
  const auto& layout = state.layout();
  const auto axis = layout.axis_of(label);
  const auto dims = layout.dims();
  const auto target = kernels::axis_offsets(dims, {axis});
  const auto rest = kernels::axis_offsets(dims, layout.complement_axes({axis}));
  double p0 = 0.0;
  for (const auto r : rest) p0 += std::norm(state.amplitudes()(target[0] + r));
  return p0 >= 1.0 - tol::kState;
}

PureState controlled_shift(const PureState& state, const LabelSet& control, const SubsystemLabel& target) {
  const auto& layout = state.layout();
  const auto control_axes = layout.axes_of(control);
  const auto target_axis = layout.axis_of(target);
  for (auto a : control_axes) {
    if (a == target_axis) fail(ErrorCode::InvalidArgument, "target is also a control");
  }
  return PureState(layout, kernels::controlled_shift(state.amplitudes(), layout.dims(), control_axes, target_axis));
}

Matrix record_states(std::size_t branches, std::size_t dim, double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) fail(ErrorCode::BadOverlap, "overlap must lie in [0, 1]");
  if (dim < branches) fail(ErrorCode::DimensionMismatch, "record space smaller than the number of branches");
  // Cholesky factor of the Gram matrix (1 - c) I + c J; row k is e_k.
  const auto n = static_cast<Eigen::Index>(branches);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double diag = 1.0 - l.row(j).head(j).squaredNorm();
    l(j, j) = std::sqrt(std::max(diag, 0.0));
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double gram = overlap - l.row(i).head(j).dot(l.row(j).head(j));
      l(i, j) = l(j, j) > 1e-14 ? gram / l(j, j) : 0.0;
    }
  }
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dim), n);
  out.topRows(n) = l.transpose().cast<Complex>();
  return out;
}

PureState premeasure(const PureState& state, const SubsystemLabel& system, const SubsystemLabel& apparatus) {
  return copy_pointer(state, system, apparatus);
}

PureState entangle_environment(const PureState& state, const SubsystemLabel& pointer, const SubsystemLabel& environment) {
  return copy_pointer(state, pointer, environment);
}

PureState broadcast_environment(const PureState& state, const SubsystemLabel& pointer, const LabelSet& environments,
                                double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) fail(ErrorCode::BadOverlap, "overlap must lie in [0, 1]");
  const auto& layout = state.layout();
  const auto pointer_axis = layout.axis_of(pointer);
  const std::size_t branches = layout[pointer_axis].dim;
  for (const auto& env : environments) {
    require_capacity(state, pointer, env);
    require_ready(state, env);
  }
  layout.axes_of(environments);

  const auto dims = layout.dims();
  Vector amps = state.amplitudes();
  for (const auto& env : environments) {
    // |k>|0> -> |k>|e_k>; only the ready slice carries amplitude
    const auto env_axis = layout.axis_of(env);
    const Matrix records = record_states(branches, dims[env_axis], overlap);
    const auto p = kernels::axis_offsets(dims, {pointer_axis});
    const auto e = kernels::axis_offsets(dims, {env_axis});
    const auto rest = kernels::axis_offsets(dims, layout.complement_axes({pointer_axis, env_axis}));
    Vector next = Vector::Zero(amps.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      for (std::size_t i = 0; i < e.size(); ++i) {
        const Complex c = records(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
        if (c == Complex(0.0)) continue;
        for (const auto r : rest) next(p[k] + e[i] + r) = c * amps(p[k] + e[0] + r);
      }
    }
    amps = std::move(next);
  }
  return PureState(layout, std::move(amps));
}

PureState cascade_environment(const PureState& state, const LabelSet& immediate, const LabelSet& distant) {
  if (immediate.size() != distant.size()) fail(ErrorCode::LengthMismatch, "immediate and distant lists differ in length");
  PureState out = state;
  for (std::size_t k = 0; k < immediate.size(); ++k) out = copy_pointer(out, immediate[k], distant[k]);
  return out;
}

PureState observer_record(const PureState& state, const SubsystemLabel& system, const SubsystemLabel& memory) {
  return copy_pointer(state, system, memory);
}

ObserverOutcomeTable conditional_probability(const PureState& state, const SubsystemLabel& memory,
                                             const SubsystemLabel& system) {
  const auto& layout = state.layout();
  const auto memory_axis = layout.axis_of(memory);
  const auto system_axis = layout.axis_of(system);
  if (memory_axis == system_axis) fail(ErrorCode::InvalidArgument, "memory and system must differ");
  const auto dims = layout.dims();
  const auto ds = static_cast<Eigen::Index>(dims[system_axis]);
  const auto dm = static_cast<Eigen::Index>(dims[memory_axis]);

  ObserverOutcomeTable table;
  const Matrix rho_s = partial_trace(state, {system}).matrix();
  for (Eigen::Index l = 0; l < ds; ++l) table.prior.push_back(rho_s(l, l).real());

  // joint[m, s] = p(memory = m, system = s)
  const Matrix block = kernels::matricize(state.amplitudes(), dims, {memory_axis, system_axis},
                                          layout.complement_axes({memory_axis, system_axis}));
  table.conditional.resize(dm, ds);
  for (Eigen::Index m = 0; m < dm; ++m) {
    double pm = 0.0;
    for (Eigen::Index s = 0; s < ds; ++s) {
      table.conditional(m, s) = block.row(m * ds + s).squaredNorm();
      pm += table.conditional(m, s);
    }
    table.memory_probability.push_back(pm);
    const bool defined = pm >= tol::kZero;
    table.defined.push_back(defined);
    if (defined) {
      table.conditional.row(m) /= pm;
    } else {
      table.conditional.row(m).setConstant(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return table;
}

void write_csv(std::ostream& out, const ObserverOutcomeTable& table) {
  out << "row";
  for (std::size_t l = 0; l < table.prior.size(); ++l) out << ",p_s" << l;
  out << "\nprior";
  for (double p : table.prior) out << ',' << format_number(p);
  out << '\n';
  for (Eigen::Index k = 0; k < table.conditional.rows(); ++k) {
    out << "mu_" << k;
    for (Eigen::Index l = 0; l < table.conditional.cols(); ++l) {
      out << ',' << (table.defined[static_cast<std::size_t>(k)] ? format_number(table.conditional(k, l)) : "undefined");
    }
    out << '\n';
  }
}

}  // namespace envlab
