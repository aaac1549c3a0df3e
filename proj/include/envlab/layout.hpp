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

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace envlab {

/// Name of one tensor factor ("S", "A", "E1", ...). Never empty.
class SubsystemLabel {
 public:
  SubsystemLabel(std::string name);
  SubsystemLabel(const char* name) : SubsystemLabel(std::string(name)) {}

  const std::string& name() const noexcept { return name_; }

  friend bool operator==(const SubsystemLabel&, const SubsystemLabel&) = default;
  friend auto operator<=>(const SubsystemLabel&, const SubsystemLabel&) = default;

 private:
  std::string name_;
};

using LabelSet = std::vector<SubsystemLabel>;

struct Subsystem {
  SubsystemLabel label;
  std::size_t dim;

  friend bool operator==(const Subsystem&, const Subsystem&) = default;
};

/// Maximum total Hilbert-space dimension. Defaults to 2^20 and can be
/// overridden with the ENVLAB_DIM_GUARD environment variable.
std::size_t dimension_guard();

inline constexpr std::size_t kDefaultDimensionGuard = std::size_t{1} << 20;

/// Ordered list of labeled subsystems. The leftmost subsystem is the
/// slowest-varying index of the flattened amplitude vector (row-major).
class SpaceLayout {
 public:
  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<Subsystem> subsystems);
  SpaceLayout(std::initializer_list<Subsystem> subsystems)
      : SpaceLayout(std::vector<Subsystem>(subsystems)) {}

  const std::vector<Subsystem>& subsystems() const noexcept { return subsystems_; }
  std::size_t size() const noexcept { return subsystems_.size(); }
  bool empty() const noexcept { return subsystems_.empty(); }
  const Subsystem& operator[](std::size_t axis) const { return subsystems_[axis]; }

  std::size_t total_dimension() const noexcept { return total_; }
  std::vector<std::size_t> dims() const;
  LabelSet labels() const;

  bool contains(const SubsystemLabel& label) const noexcept;
  /// Position of `label`; throws UnknownLabel.
  std::size_t axis_of(const SubsystemLabel& label) const;
  std::size_t dimension_of(const SubsystemLabel& label) const { return subsystems_[axis_of(label)].dim; }

  /// Axes of `labels`, sorted into layout order. Throws UnknownLabel, and
  /// InvalidArgument on repeated labels.
  std::vector<std::size_t> axes_of(const LabelSet& labels) const;
  std::vector<std::size_t> complement_axes(const std::vector<std::size_t>& axes) const;

  /// Sub-layout over the given axes, in the order given.
  SpaceLayout select(const std::vector<std::size_t>& axes) const;
  /// Sub-layout over `labels`, in layout order.
  SpaceLayout restrict_to(const LabelSet& labels) const { return select(axes_of(labels)); }
  SpaceLayout complement(const LabelSet& labels) const { return select(complement_axes(axes_of(labels))); }

  /// Concatenation; throws LabelCollision or SpaceTooLarge.
  SpaceLayout append(const SpaceLayout& other) const;

  friend bool operator==(const SpaceLayout& a, const SpaceLayout& b) { return a.subsystems_ == b.subsystems_; }

 private:
  std::vector<Subsystem> subsystems_;
  std::size_t total_ = 1;
};

}  // namespace envlab
