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

#include <json.hpp>

#include "envlab/envariance.hpp"
#include "envlab/state.hpp"

namespace envlab {

using Json = nlohmann::json;

/// {"layout": [{"label", "dim"}...], "amplitudes": [[re, im]...]}
Json state_to_json(const PureState& state);
/// Inverse of state_to_json. Entries may also be plain reals. Malformed
/// documents throw InvalidArgument; the usual state checks still apply.
PureState state_from_json(const Json& doc);

/// A complex number as [re, im]; accepts a bare real on input.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& value);

Json unitary_to_json(const SubsystemUnitary& u);
SubsystemUnitary unitary_from_json(const Json& doc);

/// NaN residuals are written as null.
Json verdict_to_json(const EnvarianceVerdict& verdict);
Json bound_to_json(const ProbabilityBound& bound);

}  // namespace envlab
