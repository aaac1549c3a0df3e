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

#include <cmath>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "envlab/envariance.hpp"
#include "envlab/errors.hpp"
#include "envlab/serialization.hpp"

namespace envlab::lab {

enum class ScenarioKind { Einselect, Redundancy, Born, Envariance, Cascade };
enum class OutputFormat { Csv, Json };

std::string_view to_string(ScenarioKind kind);
std::optional<ScenarioKind> parse_scenario_kind(std::string_view name);

/// One experiment. Defaults: equal two-branch amplitudes, N = 8, perfect
/// records, M cap 10^4, tolerance 1e-10.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Redundancy;
  std::vector<Complex> amplitudes{Complex(1.0 / std::sqrt(2.0)), Complex(1.0 / std::sqrt(2.0))};
  std::size_t env_count = 8;
  double overlap = 0.0;
  std::size_t m_cap = kDefaultMCap;
  double tolerance = tol::kState;
  /// Rescale amplitudes to unit norm instead of rejecting them.
  bool normalize = false;
  std::optional<std::string> output_path;
  OutputFormat format = OutputFormat::Csv;
  /// Born scenario only: an explicit state and its system labels replace
  /// the amplitudes.
  std::optional<PureState> state;
  LabelSet system;
};

struct FieldIssue {
  std::string field;
  std::string message;
};

/// Carries every field-level problem found in a config.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<FieldIssue> issues);
  const std::vector<FieldIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<FieldIssue> issues_;
};

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct RunResult {
  Json scenario;
  std::vector<Table> tables;
  double duration_seconds = 0.0;
  /// Largest residual observed per checked invariant.
  std::map<std::string, double> tolerance_report;
};

/// Amplitude lists like "sqrt(2/3), sqrt(1/3)" or "0.6,-0.8"; each entry is
/// a real number, a ratio a/b, or sqrt of either, with an optional sign.
std::vector<Complex> parse_amplitudes(const std::string& text);

/// Reads a config document; unknown keys are rejected.
ScenarioConfig config_from_json(const Json& doc);
Json config_to_json(const ScenarioConfig& config);

/// Field-level checks against the module preconditions; empty when valid.
std::vector<FieldIssue> validate(const ScenarioConfig& config);

/// Total dimension the scenario will allocate, computed without building it.
std::size_t projected_dimension(const ScenarioConfig& config);

/// Runs the scenario pipeline after validation (ValidationError) and the
/// dimension guard (SpaceTooLarge).
RunResult run_scenario(const ScenarioConfig& config);

/// Cells printed with 9 significant digits.
std::string format_cell(const Cell& cell);
void write_csv(std::ostream& out, const Table& table);
Json to_json(const RunResult& result);

/// Writes to `path` (atomically: temp file then rename) or to stdout when no
/// path is given. Extra CSV tables go to "<stem>.<table>.csv" beside `path`.
/// Unwritable paths throw IoError.
void emit_report(const RunResult& result, OutputFormat format, const std::optional<std::string>& path);
void emit_report(const RunResult& result, OutputFormat format, std::ostream& out);

/// 0 success, 2 validation, 3 dimension guard, 4 I/O.
int exit_code_for(const Error& error);
/// {"error": {"code", "message", "fields": [...]}, "exit_code": n}
Json error_document(const Error& error);

}  // namespace envlab::lab
