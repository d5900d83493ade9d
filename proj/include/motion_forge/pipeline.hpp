#pragma once

#include "motion_forge/config.hpp"
#include "motion_forge/height_correction.hpp"
#include "motion_forge/stats.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace motion_forge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitWarnings = 2;

nlohmann::json correctionReportToJson(const CorrectionReport& report);
nlohmann::json statsToJson(const DatasetStats& stats);

void writeStatsCsvHeader(std::ostream& out);
void writeStatsCsvRow(std::ostream& out, const std::string& dataset, const DatasetStats& stats);

struct FileOutcome {
  std::string name;  // input file name, no directory
  bool ok = false;
  bool flagged = false;
  std::string error;
};

struct PipelineResult {
  int exitCode = kExitOk;
  std::vector<FileOutcome> files;
  std::string message;
};

/// Motion files (*.json) directly inside `dir`, sorted by file name.
std::vector<std::filesystem::path> listMotionFiles(const std::filesystem::path& dir);

/// Runs correct -> smooth -> stats -> anchors on every motion file of
/// cfg.io.inputDir. Writes per input `<stem>.json` (processed sequence) and
/// `<stem>.report.json`, plus `stats.csv` and `pipeline_summary.json`.
/// A failing file is recorded and the batch continues. Exit code 1 if the
/// directory holds no motion files or any file failed, 2 if any correction was
/// flagged, 0 otherwise.
PipelineResult runPipeline(const PipelineConfig& cfg);

}  // namespace motion_forge
