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

#include "envlab/errors.hpp"

namespace envlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::LabelCollision: return "LabelCollision";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::EmptyKeepSet: return "EmptyKeepSet";
    case ErrorCode::InvalidBipartition: return "InvalidBipartition";
    case ErrorCode::BadBasis: return "BadBasis";
    case ErrorCode::LayoutMismatch: return "LayoutMismatch";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidDensity: return "InvalidDensity";
    case ErrorCode::OverlappingSplit: return "OverlappingSplit";
    case ErrorCode::UndefinedRatio: return "UndefinedRatio";
    case ErrorCode::ApparatusNotReady: return "ApparatusNotReady";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BadOverlap: return "BadOverlap";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SideViolation: return "SideViolation";
    case ErrorCode::BadIndex: return "BadIndex";
    case ErrorCode::NotEqualAmplitude: return "NotEqualAmplitude";
    case ErrorCode::AncillaTooSmall: return "AncillaTooSmall";
    case ErrorCode::PlanMismatch: return "PlanMismatch";
    case ErrorCode::UseBoundsInstead: return "UseBoundsInstead";
    case ErrorCode::MTooSmall: return "MTooSmall";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace envlab
