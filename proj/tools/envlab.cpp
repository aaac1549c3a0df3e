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

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "envlab/lab.hpp"

using namespace envlab;

namespace {

struct InlineFlags {
  std::string config_path;
  std::string amplitudes;
  std::size_t env_count = 0;
  double overlap = 0.0;
  std::size_t m_cap = 0;
  double tolerance = 0.0;
  bool normalize = false;
  std::string out;
  std::string format;
  std::string state_path;
  std::vector<std::string> system;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw lab::ValidationError({lab::FieldIssue{path, e.what()}});
  }
}

bool given(const CLI::App& sub, const std::string& name) {
  const auto* opt = sub.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

lab::ScenarioConfig build_config(lab::ScenarioKind kind, const InlineFlags& flags, const CLI::App& sub) {
  lab::ScenarioConfig config;
  if (!flags.config_path.empty()) config = lab::config_from_json(read_json_file(flags.config_path));
  config.kind = kind;
  // inline flags override the config document
  if (given(sub, "--amplitudes")) config.amplitudes = lab::parse_amplitudes(flags.amplitudes);
  if (given(sub, "--env-count")) config.env_count = flags.env_count;
  if (given(sub, "--overlap")) config.overlap = flags.overlap;
  if (given(sub, "--m-cap")) config.m_cap = flags.m_cap;
  if (given(sub, "--tolerance")) config.tolerance = flags.tolerance;
  if (given(sub, "--normalize")) config.normalize = flags.normalize;
  if (given(sub, "--out")) config.output_path = flags.out;
  if (given(sub, "--format")) config.format = flags.format == "json" ? lab::OutputFormat::Json : lab::OutputFormat::Csv;
  if (given(sub, "--state")) config.state = state_from_json(read_json_file(flags.state_path));
  if (given(sub, "--system")) config.system.assign(flags.system.begin(), flags.system.end());
  return config;
}

int report_failure(const Error& e) {
  std::cerr << lab::error_document(e).dump(2) << '\n';
  return lab::exit_code_for(e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pure-state experiments on records, redundancy and envariance"};
  app.require_subcommand(1);

  InlineFlags flags;
  struct Entry {
    lab::ScenarioKind kind;
    const char* help;
  };
  const Entry entries[] = {
      {lab::ScenarioKind::Einselect, "mutual information and coherence through premeasurement and decoherence"},
      {lab::ScenarioKind::Redundancy, "per-fragment mutual information and the redundancy ratio"},
      {lab::ScenarioKind::Born, "counting probabilities from fine-graining, plus rational bounds"},
      {lab::ScenarioKind::Envariance, "envariance verdicts for phase, swap and shift unitaries"},
      {lab::ScenarioKind::Cascade, "pointer and conjugate information relayed to distant fragments"},
  };
  std::vector<std::pair<lab::ScenarioKind, CLI::App*>> subs;
  for (const auto& entry : entries) {
    auto* sub = app.add_subcommand(std::string(lab::to_string(entry.kind)), entry.help);
    sub->add_option("--config", flags.config_path, "JSON config document");
    sub->add_option("--amplitudes", flags.amplitudes, "branch amplitudes, e.g. 'sqrt(2/3),sqrt(1/3)'");
    sub->add_option("--env-count", flags.env_count, "number of environment fragments (default 8)");
    sub->add_option("--overlap", flags.overlap, "record overlap in [0, 1] (default 0)");
    sub->add_option("--m-cap", flags.m_cap, "largest fine-graining denominator (default 10000)");
    sub->add_option("--tolerance", flags.tolerance, "amplitude matching tolerance (default 1e-10)");
    sub->add_flag("--normalize", flags.normalize, "rescale amplitudes to unit norm");
    sub->add_option("--out", flags.out, "output file; stdout when omitted");
    sub->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    if (entry.kind == lab::ScenarioKind::Born) {
      sub->add_option("--state", flags.state_path, "state document to use instead of amplitudes");
      sub->add_option("--system", flags.system, "system labels of --state")->delimiter(',');
    }
    subs.emplace_back(entry.kind, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return report_failure(lab::ValidationError({lab::FieldIssue{"arguments", e.what()}}));
  }

  try {
    for (const auto& [kind, sub] : subs) {
      if (!sub->parsed()) continue;
      const auto config = build_config(kind, flags, *sub);
      const auto result = lab::run_scenario(config);
      lab::emit_report(result, config.format, config.output_path);
    }
  } catch (const Error& e) {
    return report_failure(e);
  }
  return 0;
}
