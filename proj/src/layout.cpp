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

#include "envlab/layout.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>

#include "envlab/errors.hpp"

namespace envlab {

SubsystemLabel::SubsystemLabel(std::string name) : name_(std::move(name)) {
  if (name_.empty()) fail(ErrorCode::InvalidArgument, "subsystem label must be non-empty");
}

std::size_t dimension_guard() {
  if (const char* env = std::getenv("ENVLAB_DIM_GUARD"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
  }
  return kDefaultDimensionGuard;
}

SpaceLayout::SpaceLayout(std::vector<Subsystem> subsystems) : subsystems_(std::move(subsystems)) {
  const std::size_t guard = dimension_guard();
  std::set<SubsystemLabel> seen;
  for (const auto& s : subsystems_) {
    if (!seen.insert(s.label).second) fail(ErrorCode::LabelCollision, "duplicate label '" + s.label.name() + "'");
    if (s.dim < 1) fail(ErrorCode::InvalidArgument, "subsystem '" + s.label.name() + "' has dimension 0");
    if (total_ > guard / s.dim) {
      fail(ErrorCode::SpaceTooLarge, "total dimension exceeds guard " + std::to_string(guard));
    }
    total_ *= s.dim;
  }
}

std::vector<std::size_t> SpaceLayout::dims() const {
  std::vector<std::size_t> out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.dim);
  return out;
}

LabelSet SpaceLayout::labels() const {
  LabelSet out;
  out.reserve(subsystems_.size());
  for (const auto& s : subsystems_) out.push_back(s.label);
  return out;
}

bool SpaceLayout::contains(const SubsystemLabel& label) const noexcept {
  return std::any_of(subsystems_.begin(), subsystems_.end(), [&](const Subsystem& s) { return s.label == label; });
}

std::size_t SpaceLayout::axis_of(const SubsystemLabel& label) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (subsystems_[i].label == label) return i;
  }
  fail(ErrorCode::UnknownLabel, "no subsystem labeled '" + label.name() + "'");
}

std::vector<std::size_t> SpaceLayout::axes_of(const LabelSet& labels) const {
  std::vector<std::size_t> axes;
  axes.reserve(labels.size());
  for (const auto& label : labels) axes.push_back(axis_of(label));
  std::sort(axes.begin(), axes.end());
  if (std::adjacent_find(axes.begin(), axes.end()) != axes.end()) {
    fail(ErrorCode::InvalidArgument, "label set contains a repeated label");
  }
  return axes;
}

std::vector<std::size_t> SpaceLayout::complement_axes(const std::vector<std::size_t>& axes) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < subsystems_.size(); ++i) {
    if (std::find(axes.begin(), axes.end(), i) == axes.end()) out.push_back(i);
  }
  return out;
}

SpaceLayout SpaceLayout::select(const std::vector<std::size_t>& axes) const {
  std::vector<Subsystem> picked;
  picked.reserve(axes.size());
  for (auto a : axes) picked.push_back(subsystems_.at(a));
  return SpaceLayout(std::move(picked));
}

SpaceLayout SpaceLayout::append(const SpaceLayout& other) const {
  std::vector<Subsystem> joined = subsystems_;
  joined.insert(joined.end(), other.subsystems_.begin(), other.subsystems_.end());
  return SpaceLayout(std::move(joined));
}

}  // namespace envlab
