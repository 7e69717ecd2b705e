// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "orbent/records.hpp"

namespace orbent {

/// Scenario ids accepted in config files.
bool is_known_scenario(const std::string& id);

/// Field-level validation; returns human-readable diagnostics, empty if ok.
std::vector<std::string> validate_config(const nlohmann::json& config);

struct RunInputs {
  nlohmann::json config;
  std::uint64_t seed = 0;  // effective seed (config value unless overridden)
  int threads = 1;
  std::filesystem::path out_dir;
  bool plots = false;
};

/// Executes the configured scenario and returns its records. Per-cell runtime
/// errors become {"error": ...} payloads; the run continues.
std::vector<RunRecord> run_scenario(const RunInputs& in);

struct RunOptions {
  std::filesystem::path config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> threads_override;  // else ORBENT_THREADS, else config
  std::filesystem::path out_dir = ".";
};

/// CLI entry: parse + validate + run + write records.jsonl, summary.csv and
/// requested plots. Returns a process exit code.
int run_experiment(const RunOptions& opts, std::ostream& log);

/// Reruns every golden case (subdirectories with config.json + records.jsonl)
/// and diffs fresh records against the stored ones within tolerances.
/// Timing fields are ignored. Returns a process exit code.
int verify_goldens(const std::filesystem::path& golden_dir, int threads,
                   std::ostream& log);

/// Field-by-field comparison used by verify; tolerances: exact for strings,
/// booleans and integers, relative 1e-9 for floating numbers. Differences are
/// appended as JSON-pointer-style paths.
bool records_equivalent(const RunRecord& fresh, const RunRecord& golden,
                        std::vector<std::string>& diffs);

}  // namespace orbent
