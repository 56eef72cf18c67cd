#pragma once

#include <string>

#include "opus/pipeline.hpp"

namespace opus {

// Versioned JSON result document: metrics, per-stage timings, poses and the
// configuration echo.  parse_report inverts write_report for the fields it
// owns (round-trip tested).
std::string report_to_json(const SolveResult& result, const SolverConfig& cfg,
                           const std::string& instance_name);

struct ParsedReport {
  int schema_version = 0;
  std::string instance_name;
  double best_length = 0.0;
  double height = 0.0;
  double waste_ratio = 0.0;
  std::vector<Pose> poses;
  uint64_t seed = 0;
  std::string backend;
};

ParsedReport parse_report(const std::string& json_text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::string tune_rows_to_json(const std::vector<TuneRow>& rows, const TuneOptions& opt);

}  // namespace opus
