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

#include "envlab/kernels.hpp"

namespace envlab::kernels {

std::vector<Index> axis_offsets(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& axes) {
  std::vector<Index> strides(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) strides[i - 1] = strides[i] * static_cast<Index>(dims[i]);

  std::vector<Index> offsets{0};
  for (const auto axis : axes) {
    std::vector<Index> next;
    next.reserve(offsets.size() * dims[axis]);
    for (const Index base : offsets) {
      for (std::size_t v = 0; v < dims[axis]; ++v) next.push_back(base + static_cast<Index>(v) * strides[axis]);
    }
    offsets = std::move(next);
  }
  return offsets;
}

std::size_t product_of(const std::vector<std::size_t>& dims, const std::vector<std::size_t>& axes) {
  std::size_t p = 1;
  for (auto a : axes) p *= dims[a];
  return p;
}

}  // namespace envlab::kernels
