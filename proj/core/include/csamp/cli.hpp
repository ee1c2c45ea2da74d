#pragma once

#include <string>
#include <vector>

#include "csamp/sampler.hpp"

namespace csamp {

enum class RunMode { sample, diagnose, audit, baseline_compare };

struct RunManifest {
  std::string body_path;
  SamplerConfig config;
  int chains = 1;
  std::string out_path;  // empty: samples/reports to stdout
  RunMode mode = RunMode::sample;
  bool warm_explicit = false;  // --warm given; otherwise auto per body
};

/// Parses the flag list (without the program name) into a validated
/// manifest. Throws UsageError on unknown flags, missing body file, or
/// invalid numerics.
RunManifest parse_args(const std::vector<std::string>& args);

/// Executes the manifest. Returns the process exit code; sample mode writes
/// one JSON object per iterate plus a telemetry summary, diagnose adds the
/// diagnostics report, audit emits the bound audits, baseline-compare emits
/// a CSV of ASF vs ball walk vs hit-and-run.
int run(const RunManifest& manifest);

/// Full entry point: parse, run, and map errors to exit codes
/// (1 runtime, 2 usage, 3 geometry violation, 4 budget exceeded).
int cli_main(const std::vector<std::string>& args);

}  // namespace csamp
