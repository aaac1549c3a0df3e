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

#include "envlab/lab.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "envlab/format.hpp"
#include "envlab/info.hpp"
#include "envlab/kernels.hpp"
#include "envlab/measurement.hpp"

namespace envlab::lab {

namespace {

constexpr std::size_t kConvergenceM[] = {100, 1000, 10000};

std::string join_issues(const std::vector<FieldIssue>& issues) {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += issue.field + ": " + issue.message;
  }
  return out;
}

ValidationError invalid(const std::string& field, const std::string& message) {
  return ValidationError(std::vector<FieldIssue>{{field, message}});
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_plain(const std::string& text) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw invalid("amplitudes", "cannot read '" + text + "' as a number");
  return value;
}

double parse_ratio(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_plain(trim(text));
  return parse_plain(trim(text.substr(0, slash))) / parse_plain(trim(text.substr(slash + 1)));
}

double parse_entry(std::string text) {
  double sign = 1.0;
  if (!text.empty() && (text[0] == '-' || text[0] == '+') && text.find("sqrt", 1) != std::string::npos) {
    sign = text[0] == '-' ? -1.0 : 1.0;
    text = trim(text.substr(1));
  }
  if (text.rfind("sqrt(", 0) == 0 && text.back() == ')') {
    const double inner = parse_ratio(text.substr(5, text.size() - 6));
    if (inner < 0.0) throw invalid("amplitudes", "sqrt of a negative number");
    return sign * std::sqrt(inner);
  }
  return sign * parse_ratio(text);
}

PureState single_label(const std::string& label, const std::vector<Complex>& amps) {
  return PureState(SpaceLayout{{label, amps.size()}},
                   Eigen::Map<const Vector>(amps.data(), static_cast<Eigen::Index>(amps.size())));
}

PureState ready(const std::string& label, std::size_t dim) { return PureState::basis(SpaceLayout{{label, dim}}, {0}); }

LabelSet numbered(const std::string& prefix, std::size_t n) {
  LabelSet out;
  for (std::size_t i = 1; i <= n; ++i) out.emplace_back(prefix + std::to_string(i));
  return out;
}

std::vector<Complex> effective_amplitudes(const ScenarioConfig& config) {
  std::vector<Complex> amps = config.amplitudes;
  if (config.normalize) {
    double norm = 0.0;
    for (auto a : amps) norm += std::norm(a);
    norm = std::sqrt(norm);
    for (auto& a : amps) a /= norm;
  }
  return amps;
}

// Σ_k a_k |k>_S |k>_E
PureState paired_state(const std::vector<Complex>& amps) {
  const std::size_t d = amps.size();
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d * d));
  for (std::size_t k = 0; k < d; ++k) v(static_cast<Eigen::Index>(k * d + k)) = amps[k];
  return PureState(SpaceLayout{{"S", d}, {"E", d}}, v);
}

double norm_defect(const PureState& s) { return std::abs(s.amplitudes().norm() - 1.0); }

void note(RunResult& result, const std::string& key, double value) {
  auto [it, inserted] = result.tolerance_report.emplace(key, value);
  if (!inserted) it->second = std::max(it->second, value);
}

// roundoff below the zero floor prints as 0 so tables stay readable
double floored(double v) { return std::abs(v) < tol::kZero ? 0.0 : v; }

Json number_to_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

Json cell_to_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return number_to_json(floored(v));
        } else {
          return v;
        }
      },
      cell);
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      fail(ErrorCode::IoError, "write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorCode::IoError, "cannot move output into '" + path.string() + "'");
  }
}

std::string table_csv(const Table& table) {
  std::ostringstream out;
  write_csv(out, table);
  return out.str();
}

// ---- scenario pipelines ----

void run_redundancy(const ScenarioConfig& config, RunResult& result) {
  const auto amps = effective_amplitudes(config);
  const std::size_t d = amps.size();
  PureState state = tensor_product(single_label("S", amps), ready("A", d));
  const LabelSet envs = numbered("E", config.env_count);
  for (const auto& e : envs) state = tensor_product(state, ready(e.name(), d));
  state = broadcast_environment(premeasure(state, "S", "A"), "A", envs, config.overlap);

  std::vector<LabelSet> fragments;
  for (const auto& e : envs) fragments.push_back({e});
  const auto report = redundancy_report(state, {"S"}, fragments);

  Table table{"redundancy", {"fragment_index", "mi_bits", "cumulative_bits", "ratio"}, {}};
  double cumulative = 0.0;
  for (std::size_t i = 0; i < report.per_fragment_mi.size(); ++i) {
    cumulative += report.per_fragment_mi[i];
    table.rows.push_back({static_cast<std::int64_t>(i), report.per_fragment_mi[i], cumulative, report.ratio});
  }
  result.tables.push_back(std::move(table));
  note(result, "norm_defect", norm_defect(state));
}

void run_einselect(const ScenarioConfig& config, RunResult& result) {
  const auto amps = effective_amplitudes(config);
  const std::size_t d = amps.size();
  const PureState initial = tensor_product(tensor_product(single_label("S", amps), ready("A", d)), ready("E", d));
  const PureState premeasured = premeasure(initial, "S", "A");
  const PureState decohered = broadcast_environment(premeasured, "A", {"E"}, config.overlap);

  Table table{"einselect", {"stage", "mi_S_A", "mi_SA_E", "offdiag_norm", "purity"}, {}};
  for (const auto& [stage, state] : {std::pair<std::string, const PureState&>{"initial", initial},
                                     {"premeasured", premeasured},
                                     {"decohered", decohered}}) {
    const Matrix rho = partial_trace(state, {"S", "A"}).matrix();
    const double offdiag = (rho - Matrix(rho.diagonal().asDiagonal())).norm();
    const double purity = (rho * rho).trace().real();
    table.rows.push_back({stage, mutual_information(state, {{"S"}, {"A"}}),
                          mutual_information(state, {{"S", "A"}, {"E"}}), offdiag, purity});
    note(result, "norm_defect", norm_defect(state));
  }
  result.tables.push_back(std::move(table));
}

void run_born(const ScenarioConfig& config, RunResult& result) {
  const PureState state = config.state ? *config.state : paired_state(effective_amplitudes(config));
  const LabelSet system = config.state ? config.system : LabelSet{"S"};
  const auto weights = schmidt_weights(state, system);

  try {
    const auto p = born_probabilities(state, system, config.tolerance, config.m_cap);
    Table table{"born", {"outcome_index", "p_counting", "p_amplitude_squared", "abs_gap"}, {}};
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double gap = std::abs(p[k] - weights[k]);
      table.rows.push_back({static_cast<std::int64_t>(k), p[k], weights[k], gap});
      note(result, "born_abs_gap", gap);
    }
    result.tables.push_back(std::move(table));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UseBoundsInstead) throw;
  }

  Table convergence{"convergence", {"m", "max_width", "width_bound", "contains_truth"}, {}};
  for (std::size_t m : kConvergenceM) {
    if (m < weights.size()) continue;
    const auto bound = rational_bounds(state, system, m);
    double widest = 0.0;
    bool contains = true;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      widest = std::max(widest, bound.upper[k] - bound.lower[k]);
      // Exact rational weights sit on the interval ends up to roundoff.
      contains = contains && bound.lower[k] - config.tolerance <= weights[k] &&
                 weights[k] <= bound.upper[k] + config.tolerance;
    }
    convergence.rows.push_back({static_cast<std::int64_t>(m), widest, 2.0 / static_cast<double>(m), contains});
    note(result, "bound_width_times_m", widest * static_cast<double>(m));
  }
  result.tables.push_back(std::move(convergence));
}

void run_envariance(const ScenarioConfig& config, RunResult& result) {
  const auto amps = effective_amplitudes(config);
  const std::size_t d = amps.size();
  const PureState state = paired_state(amps);
  const auto sd = schmidt_decompose(state, {"S"});

  std::vector<std::pair<std::string, SubsystemUnitary>> transforms;
  std::vector<double> phases;
  for (std::size_t k = 0; k < sd.rank(); ++k) phases.push_back(0.5 * static_cast<double>(k + 1));
  transforms.emplace_back("schmidt_phase", schmidt_phase_unitary(sd, phases));
  const auto n = static_cast<Eigen::Index>(d);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    Matrix swap = Matrix::Identity(n, n);
    swap(k, k) = swap(k + 1, k + 1) = 0.0;
    swap(k, k + 1) = swap(k + 1, k) = 1.0;
    transforms.emplace_back("swap_" + std::to_string(k) + "_" + std::to_string(k + 1), SubsystemUnitary({"S"}, swap));
  }
  Matrix shift = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) shift((k + 1) % n, k) = 1.0;
  transforms.emplace_back("cyclic_shift", SubsystemUnitary({"S"}, shift));

  Table table{"envariance", {"transformation", "envariant", "residual", "system_trace_distance"}, {}};
  for (const auto& [name, u] : transforms) {
    const auto verdict = is_envariant(state, u, {"E"});
    table.rows.push_back({name, verdict.envariant, verdict.residual, verdict.system_trace_distance});
    if (verdict.envariant) note(result, "undo_residual", verdict.residual);
  }
  result.tables.push_back(std::move(table));
}

void run_cascade(const ScenarioConfig& config, RunResult& result) {
  const auto amps = effective_amplitudes(config);
  const std::size_t d = amps.size();
  const LabelSet immediate = numbered("E", config.env_count);
  const LabelSet distant = numbered("D", config.env_count);
  PureState state = single_label("S", amps);
  for (const auto& e : immediate) state = tensor_product(state, ready(e.name(), d));
  state = broadcast_environment(state, "S", immediate, config.overlap);
  for (const auto& e : distant) state = tensor_product(state, ready(e.name(), d));
  state = cascade_environment(state, immediate, distant);

  const Matrix pointer = Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const Matrix conjugate = fourier_basis(d);
  Table table{"cascade",
              {"fragment_index", "immediate_pointer_bits", "distant_pointer_bits", "distant_conjugate_bits"},
              {}};
  for (std::size_t i = 0; i < immediate.size(); ++i) {
    const double near = basis_conditioned_mutual_information(state, {{"S"}, {immediate[i]}}, pointer);
    const double far = basis_conditioned_mutual_information(state, {{"S"}, {distant[i]}}, pointer);
    const double far_conjugate = basis_conditioned_mutual_information(state, {{"S"}, {distant[i]}}, conjugate);
    table.rows.push_back({static_cast<std::int64_t>(i), near, far, far_conjugate});
    note(result, "relay_gap", std::abs(near - far));
  }
  result.tables.push_back(std::move(table));
  note(result, "norm_defect", norm_defect(state));
}

std::size_t saturating_product(std::size_t base, std::size_t exponent) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (total > std::numeric_limits<std::size_t>::max() / base) return std::numeric_limits<std::size_t>::max();
    total *= base;
  }
  return total;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

}  // namespace

ValidationError::ValidationError(std::vector<FieldIssue> issues)
    : Error(ErrorCode::InvalidArgument, join_issues(issues)), issues_(std::move(issues)) {}

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Einselect: return "einselect";
    case ScenarioKind::Redundancy: return "redundancy";
    case ScenarioKind::Born: return "born";
    case ScenarioKind::Envariance: return "envariance";
    case ScenarioKind::Cascade: return "cascade";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  for (auto kind : {ScenarioKind::Einselect, ScenarioKind::Redundancy, ScenarioKind::Born, ScenarioKind::Envariance,
                    ScenarioKind::Cascade}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::vector<Complex> parse_amplitudes(const std::string& text) {
  std::vector<Complex> out;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    token = trim(token);
    if (token.empty()) throw invalid("amplitudes", "empty entry in '" + text + "'");
    out.emplace_back(parse_entry(token), 0.0);
  }
  if (out.empty()) throw invalid("amplitudes", "no amplitudes given");
  return out;
}

ScenarioConfig config_from_json(const Json& doc) {
  if (!doc.is_object()) throw invalid("config", "must be a JSON object");
  ScenarioConfig config;
  std::vector<FieldIssue> issues;
  const auto issue = [&](const std::string& field, const std::string& message) { issues.push_back({field, message}); };

  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "scenario") {
        const auto kind = parse_scenario_kind(value.get<std::string>());
        if (kind) config.kind = *kind;
        else issue(key, "unknown scenario '" + value.get<std::string>() + "'");
      } else if (key == "amplitudes") {
        if (value.is_string()) {
          config.amplitudes = parse_amplitudes(value.get<std::string>());
        } else {
          config.amplitudes.clear();
          for (const auto& a : value) {
            config.amplitudes.push_back(a.is_string() ? Complex(parse_entry(a.get<std::string>()), 0.0)
                                                      : complex_from_json(a));
          }
        }
      } else if (key == "env_count") {
        if (!value.is_number_unsigned()) issue(key, "must be a non-negative integer");
        else config.env_count = value.get<std::size_t>();
      } else if (key == "overlap") {
        config.overlap = value.get<double>();
      } else if (key == "m_cap") {
        if (!value.is_number_unsigned()) issue(key, "must be a positive integer");
        else config.m_cap = value.get<std::size_t>();
      } else if (key == "tolerance") {
        config.tolerance = value.get<double>();
      } else if (key == "normalize") {
        config.normalize = value.get<bool>();
      } else if (key == "out") {
        config.output_path = value.get<std::string>();
      } else if (key == "format") {
        const auto f = value.get<std::string>();
        if (f == "csv") config.format = OutputFormat::Csv;
        else if (f == "json") config.format = OutputFormat::Json;
        else issue(key, "must be 'csv' or 'json'");
      } else if (key == "state") {
        config.state = state_from_json(value);
      } else if (key == "state_file") {
        std::ifstream in(value.get<std::string>());
        if (!in) fail(ErrorCode::IoError, "cannot read state file '" + value.get<std::string>() + "'");
        config.state = state_from_json(Json::parse(in));
      } else if (key == "system") {
        config.system.clear();
        for (const auto& label : value) config.system.emplace_back(label.get<std::string>());
      } else {
        issue(key, "unknown key");
      }
    } catch (const ValidationError& e) {
      for (const auto& i : e.issues()) issue(key, i.message);
    } catch (const Json::exception& e) {
      issue(key, std::string("wrong type: ") + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::IoError) throw;
      issue(key, e.what());
    }
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return config;
}

Json config_to_json(const ScenarioConfig& config) {
  Json amps = Json::array();
  for (auto a : config.amplitudes) amps.push_back(complex_to_json(a));
  Json doc{{"scenario", std::string(to_string(config.kind))},
           {"amplitudes", amps},
           {"env_count", config.env_count},
           {"overlap", config.overlap},
           {"m_cap", config.m_cap},
           {"tolerance", config.tolerance},
           {"normalize", config.normalize},
           {"format", config.format == OutputFormat::Csv ? "csv" : "json"}};
  if (config.state) {
    doc["state"] = state_to_json(*config.state);
    Json system = Json::array();
    for (const auto& l : config.system) system.push_back(l.name());
    doc["system"] = system;
  }
  return doc;
}

std::vector<FieldIssue> validate(const ScenarioConfig& config) {
  std::vector<FieldIssue> issues;
  const auto issue = [&](const std::string& field, const std::string& message) { issues.push_back({field, message}); };
  const bool explicit_state = config.state.has_value();

  if (explicit_state && config.kind != ScenarioKind::Born) issue("state", "only the born scenario takes an explicit state");
  if (!explicit_state) {
    if (config.amplitudes.size() < 2) issue("amplitudes", "need at least two (pointer dimension >= 2)");
    double norm = 0.0;
    bool finite = true;
    std::size_t branches = 0;
    for (auto a : config.amplitudes) {
      finite = finite && std::isfinite(a.real()) && std::isfinite(a.imag());
      norm += std::norm(a);
      if (std::norm(a) > tol::kZero) ++branches;
    }
    if (!finite) {
      issue("amplitudes", "must be finite");
    } else if (config.normalize) {
      if (norm <= tol::kZero) issue("amplitudes", "cannot normalize the zero vector");
    } else if (std::abs(std::sqrt(norm) - 1.0) > tol::kState) {
      issue("amplitudes", "not normalized (norm " + format_number(std::sqrt(norm)) + "); pass --normalize to rescale");
    }
    if (config.kind == ScenarioKind::Redundancy && finite && branches < 2) {
      issue("amplitudes", "a single branch has zero entropy, so the redundancy ratio is undefined");
    }
  } else {
    if (config.system.empty()) issue("system", "an explicit state needs its system labels");
    for (const auto& l : config.system) {
      if (!config.state->layout().contains(l)) issue("system", "unknown label '" + l.name() + "'");
    }
    if (!config.system.empty() && config.system.size() >= config.state->layout().size()) {
      issue("system", "must leave at least one subsystem as the environment");
    }
  }
  if ((config.kind == ScenarioKind::Redundancy || config.kind == ScenarioKind::Cascade) && config.env_count < 1) {
    issue("env_count", "need at least one environment fragment");
  }
  if (!std::isfinite(config.overlap) || config.overlap < 0.0 || config.overlap > 1.0) {
    issue("overlap", "must lie in [0, 1]");
  }
  if (config.m_cap < 1) issue("m_cap", "must be at least 1");
  if (!std::isfinite(config.tolerance) || config.tolerance <= 0.0) issue("tolerance", "must be positive");
  return issues;
}

std::size_t projected_dimension(const ScenarioConfig& config) {
  const std::size_t d = config.amplitudes.size();
  switch (config.kind) {
    case ScenarioKind::Einselect: return saturating_product(d, 3);
    case ScenarioKind::Redundancy: return saturating_product(d, config.env_count + 2);
    case ScenarioKind::Envariance: return saturating_product(d, 2);
    case ScenarioKind::Cascade: return saturating_product(d, 2 * config.env_count + 1);
    case ScenarioKind::Born: {
      const PureState state = config.state ? *config.state : paired_state(effective_amplitudes(config));
      const LabelSet system = config.state ? config.system : LabelSet{"S"};
      std::size_t m = 0;
      try {
        m = make_fine_graining_plan(state, system, "ancilla", config.tolerance, config.m_cap).total;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::UseBoundsInstead) throw;
        return state.layout().total_dimension();
      }
      const auto sd_left = state.layout().restrict_to(system).total_dimension();
      const auto env = state.layout().total_dimension() / sd_left;
      return saturating_mul(saturating_mul(sd_left, std::max(env, m)), m);
    }
  }
  return 0;
}

RunResult run_scenario(const ScenarioConfig& config) {
  if (auto issues = validate(config); !issues.empty()) throw ValidationError(std::move(issues));
  const std::size_t projected = projected_dimension(config);
  const std::size_t guard = dimension_guard();
  if (projected > guard) {
    fail(ErrorCode::SpaceTooLarge, "scenario needs total dimension " + std::to_string(projected) +
                                       " but the guard is " + std::to_string(guard) +
                                       " (set ENVLAB_DIM_GUARD to raise it)");
  }

  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  result.scenario = config_to_json(config);
  switch (config.kind) {
    case ScenarioKind::Einselect: run_einselect(config, result); break;
    case ScenarioKind::Redundancy: run_redundancy(config, result); break;
    case ScenarioKind::Born: run_born(config, result); break;
    case ScenarioKind::Envariance: run_envariance(config, result); break;
    case ScenarioKind::Cascade: run_cascade(config, result); break;
  }
  result.duration_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string format_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_number(floored(v));
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return v;
      },
      cell);
}

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

Json to_json(const RunResult& result) {
  Json tables = Json::array();
  for (const auto& table : result.tables) {
    Json rows = Json::array();
    for (const auto& row : table.rows) {
      Json r = Json::array();
      for (const auto& cell : row) r.push_back(cell_to_json(cell));
      rows.push_back(std::move(r));
    }
    tables.push_back({{"name", table.name}, {"columns", table.columns}, {"rows", rows}});
  }
  Json report = Json::object();
  for (const auto& [key, value] : result.tolerance_report) report[key] = number_to_json(value);
  return {{"scenario", result.scenario},
          {"tables", tables},
          {"tolerance_report", report},
          {"duration_seconds", result.duration_seconds}};
}

void emit_report(const RunResult& result, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Json) {
    out << to_json(result).dump(2) << '\n';
    return;
  }
  const bool several = result.tables.size() > 1;
  for (std::size_t i = 0; i < result.tables.size(); ++i) {
    if (i > 0) out << '\n';
    if (several) out << "# " << result.tables[i].name << '\n';
    write_csv(out, result.tables[i]);
  }
}

void emit_report(const RunResult& result, OutputFormat format, const std::optional<std::string>& path) {
  if (!path) {
    emit_report(result, format, std::cout);
    return;
  }
  const std::filesystem::path target(*path);
  if (format == OutputFormat::Json) {
    write_atomically(target, to_json(result).dump(2) + "\n");
    return;
  }
  for (std::size_t i = 0; i < result.tables.size(); ++i) {
    std::filesystem::path file = target;
    if (i > 0) {
      file = target.parent_path() / (target.stem().string() + "." + result.tables[i].name + ".csv");
    }
    write_atomically(file, table_csv(result.tables[i]));
  }
}

int exit_code_for(const Error& error) {
  switch (error.code()) {
    case ErrorCode::SpaceTooLarge: return 3;
    case ErrorCode::IoError: return 4;
    default: return 2;
  }
}

Json error_document(const Error& error) {
  Json fields = Json::array();
  if (const auto* v = dynamic_cast<const ValidationError*>(&error)) {
    for (const auto& issue : v->issues()) fields.push_back({{"field", issue.field}, {"message", issue.message}});
  }
  return {{"error", {{"code", std::string(envlab::to_string(error.code()))}, {"message", error.what()}, {"fields", fields}}},
          {"exit_code", exit_code_for(error)}};
}

}  // namespace envlab::lab
