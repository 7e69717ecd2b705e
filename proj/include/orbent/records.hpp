// Copyright 2026 The orbent Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace orbent {

inline constexpr const char* kRecordSchema = "orbent/record/1";

/// One result row: scenario, sweep-cell coordinates, payload, provenance.
/// Timing fields are excluded from hashing and golden comparison.
struct RunRecord {
  std::string scenario;
  nlohmann::json cell;     // sweep coordinates, e.g. {"N":64,"m":3}
  nlohmann::json payload;  // scenario result fragment
  std::uint64_t seed = 0;
  std::string config_hash;
  double wall_ms = 0.0;

  nlohmann::json to_json() const;
  static RunRecord from_json(const nlohmann::json& j);
};

/// FNV-1a over the canonical (sorted-key) dump; stable across platforms.
std::string config_hash_hex(const nlohmann::json& config);

void write_jsonl(const std::filesystem::path& path,
                 const std::vector<RunRecord>& records);
std::vector<RunRecord> read_jsonl(const std::filesystem::path& path);

/// Flat projection of the records for spreadsheet use.
void write_csv_summary(const std::filesystem::path& path,
                       const std::vector<RunRecord>& records);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> y_lo;  // optional whiskers (same length as y or empty)
  std::vector<double> y_hi;
};

/// Minimal standalone SVG line plot; regenerated from records, never from
/// in-memory state.
void write_svg_line_plot(const std::filesystem::path& path,
                         const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<PlotSeries>& series);

}  // namespace orbent
