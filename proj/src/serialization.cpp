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

#include "envlab/serialization.hpp"

#include <cmath>

#include "envlab/errors.hpp"

namespace envlab {

namespace {

Json nullable(double value) { return std::isnan(value) ? Json(nullptr) : Json(value); }

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& value) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
    return {value[0].get<double>(), value[1].get<double>()};
  }
  fail(ErrorCode::InvalidArgument, "complex value must be a number or [re, im]");
}

Json state_to_json(const PureState& state) {
  Json layout = Json::array();
  for (const auto& sub : state.layout().subsystems()) layout.push_back({{"label", sub.label.name()}, {"dim", sub.dim}});
  Json amps = Json::array();
  for (Eigen::Index i = 0; i < state.amplitudes().size(); ++i) amps.push_back(complex_to_json(state.amplitudes()(i)));
  return {{"layout", layout}, {"amplitudes", amps}};
}

PureState state_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("layout") || !doc.contains("amplitudes") || !doc["layout"].is_array() ||
      !doc["amplitudes"].is_array()) {
    fail(ErrorCode::InvalidArgument, "state document needs 'layout' and 'amplitudes' arrays");
  }
  std::vector<Subsystem> subs;
  for (const auto& entry : doc["layout"]) {
    if (!entry.is_object() || !entry.contains("label") || !entry.contains("dim") || !entry["label"].is_string() ||
        !entry["dim"].is_number_unsigned()) {
      fail(ErrorCode::InvalidArgument, "layout entries are {\"label\": string, \"dim\": positive integer}");
    }
    subs.push_back({entry["label"].get<std::string>(), entry["dim"].get<std::size_t>()});
  }
  const auto& amps = doc["amplitudes"];
  Vector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(amps[i]);
  return PureState(SpaceLayout(std::move(subs)), std::move(v));
}

Json unitary_to_json(const SubsystemUnitary& u) {
  Json targets = Json::array();
  for (const auto& t : u.targets()) targets.push_back(t.name());
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < u.matrix().rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < u.matrix().cols(); ++c) row.push_back(complex_to_json(u.matrix()(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"targets", targets}, {"matrix", rows}};
}

SubsystemUnitary unitary_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("targets") || !doc.contains("matrix") || !doc["matrix"].is_array()) {
    fail(ErrorCode::InvalidArgument, "unitary document needs 'targets' and 'matrix'");
  }
  LabelSet targets;
  for (const auto& t : doc["targets"]) targets.emplace_back(t.get<std::string>());
  const auto& rows = doc["matrix"];
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      fail(ErrorCode::InvalidArgument, "unitary matrix must be square");
    }
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return SubsystemUnitary(std::move(targets), std::move(m));
}

Json verdict_to_json(const EnvarianceVerdict& verdict) {
  return {{"envariant", verdict.envariant},
          {"undo", verdict.undo ? unitary_to_json(*verdict.undo) : Json(nullptr)},
          {"residual", nullable(verdict.residual)},
          {"system_trace_distance", verdict.system_trace_distance},
          {"reason", verdict.reason}};
}

Json bound_to_json(const ProbabilityBound& bound) {
  return {{"m_used", bound.m_used},
          {"lower", bound.lower},
          {"upper", bound.upper},
          {"lower_counts", bound.lower_counts},
          {"upper_counts", bound.upper_counts}};
}

}  // namespace envlab
