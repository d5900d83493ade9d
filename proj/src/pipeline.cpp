#include "motion_forge/pipeline.hpp"

#include "motion_forge/motion_io.hpp"
#include "motion_forge/sampling.hpp"
#include "motion_forge/smoothing.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <optional>
#include <ostream>
#include <thread>

namespace motion_forge {

namespace {

nlohmann::json vec3ToJson(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }

struct FileWork {
  FileOutcome outcome;
  std::optional<DatasetStats> stats;
  StatsAccumulator accumulator;
};

FileWork processFile(const std::filesystem::path& input, std::size_t index, const PipelineConfig& cfg) {
  FileWork work;
  work.outcome.name = input.filename().string();
  try {
    MotionDocument doc = readMotionFile(input);
    const CorrectionResult corrected = correctRootHeight(doc.sequence, doc.skeleton, cfg.correction);
    const int window = cfg.smoothing.resolveWindow(corrected.sequence.size());
    doc.sequence = smoothSequence(corrected.sequence, cfg.smoothing, cfg.channels);

    work.accumulator.add(doc.sequence);
    const DatasetStats stats = work.accumulator.result();

    const std::vector<double> energy = kineticEnergyProxy(doc.sequence);
    SamplerParams params = cfg.sampling.sampler;
    params.seed += index;
    const AnchorSampler sampler(detectAnchors(energy, cfg.sampling.plateauTolerance), params);

    nlohmann::json report;
    report["input"] = work.outcome.name;
    report["correction"] = correctionReportToJson(corrected.report);
    report["smoothing"] = {{"window", window},
                           {"order", cfg.smoothing.order},
                           {"root_axes", cfg.channels.rootAxes},
                           {"joints", cfg.channels.joints}};
    report["stats"] = statsToJson(stats);
    report["anchors"] = {{"energy", energy}, {"sampler", sampler.toJson()}};

    const std::string stem = input.stem().string();
    writeMotionFile(cfg.io.outputDir / (stem + ".json"), doc);
    writeJsonFile(cfg.io.outputDir / (stem + ".report.json"), report);

    work.stats = stats;
    work.outcome.ok = true;
    work.outcome.flagged = corrected.report.flagged();
  } catch (const std::exception& e) {
    work.outcome.error = e.what();
    spdlog::error("{}: {}", work.outcome.name, e.what());
  }
  return work;
}

}  // namespace

nlohmann::json correctionReportToJson(const CorrectionReport& report) {
  nlohmann::json j;
  j["original_heights"] = report.originalHeights;
  j["corrected_heights"] = report.correctedHeights;
  j["contact_frames"] = report.contactFrames;
  j["maxima"] = report.extrema.maxima;
  j["minima"] = report.extrema.minima;
  j["skipped_maxima"] = report.extrema.skipSet;
  nlohmann::json jumps = nlohmann::json::array();
  for (const JumpSegment& s : report.jumpSegments) {
    jumps.push_back({{"takeoff", s.takeoff},
                     {"landing", s.landing},
                     {"interior_frames", s.interiorFrames},
                     {"flight_time", s.flightTime}});
  }
  j["jump_segments"] = std::move(jumps);
  j["penetration_fixes"] = report.penetrationFixes;
  nlohmann::json flags = nlohmann::json::array();
  for (const SegmentFlag& f : report.flags) {
    flags.push_back({{"takeoff", f.takeoff},
                     {"landing", f.landing ? nlohmann::json(*f.landing) : nlohmann::json()},
                     {"issue", toString(f.issue)},
                     {"message", f.message}});
  }
  j["flags"] = std::move(flags);
  return j;
}

nlohmann::json statsToJson(const DatasetStats& stats) {
  return {{"fps", stats.fps},
          {"mean_joint_vel", stats.meanJointVel},
          {"mean_body_lin_vel", stats.meanBodyLinVel},
          {"mean_body_lin_vel_axis", vec3ToJson(stats.meanBodyLinVelAxis)},
          {"mean_body_ang_vel", stats.meanBodyAngVel},
          {"mean_body_ang_vel_axis", vec3ToJson(stats.meanBodyAngVelAxis)},
          {"mean_frames", stats.meanFrames},
          {"sequence_count", stats.sequenceCount},
          {"skipped_sequences", stats.skippedSequences}};
}

void writeStatsCsvHeader(std::ostream& out) {
  out << "dataset,fps,joint_vel,body_lin_vel,body_ang_vel,frames\n";
}

void writeStatsCsvRow(std::ostream& out, const std::string& dataset, const DatasetStats& stats) {
  out << dataset << ',' << formatNumber(stats.fps) << ',' << formatNumber(stats.meanJointVel) << ','
      << formatNumber(stats.meanBodyLinVel) << ',' << formatNumber(stats.meanBodyAngVel) << ','
      << formatNumber(stats.meanFrames) << '\n';
}

std::vector<std::filesystem::path> listMotionFiles(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error("input directory " + dir.string() + " does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
  return files;
}

PipelineResult runPipeline(const PipelineConfig& cfg) {
  cfg.validate();
  PipelineResult result;
  const std::vector<std::filesystem::path> inputs = listMotionFiles(cfg.io.inputDir);
  if (inputs.empty()) {
    result.exitCode = kExitError;
    result.message = "no input sequences";
    return result;
  }
  std::filesystem::create_directories(cfg.io.outputDir);

  std::vector<FileWork> work(inputs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < inputs.size(); i = next++) {
      work[i] = processFile(inputs[i], i, cfg);
    }
  };
  const std::size_t jobs = std::clamp<std::size_t>(cfg.io.jobs, 1, inputs.size());
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < jobs; ++t) {
      threads.emplace_back(worker);
    }
  }

  StatsAccumulator total;
  std::ofstream csv(cfg.io.outputDir / "stats.csv", std::ios::binary);
  writeStatsCsvHeader(csv);
  std::size_t failed = 0;
  std::size_t flagged = 0;
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const FileWork& w = work[i];
    result.files.push_back(w.outcome);
    nlohmann::json entry = {{"input", w.outcome.name}, {"ok", w.outcome.ok}, {"flagged", w.outcome.flagged}};
    if (w.outcome.ok) {
      total.merge(w.accumulator);
      writeStatsCsvRow(csv, inputs[i].stem().string(), *w.stats);
      entry["output"] = inputs[i].stem().string() + ".json";
      entry["report"] = inputs[i].stem().string() + ".report.json";
    } else {
      entry["error"] = w.outcome.error;
      ++failed;
    }
    flagged += w.outcome.flagged ? 1 : 0;
    files.push_back(std::move(entry));
  }
  nlohmann::json summary = {{"files", std::move(files)}, {"failed", failed}, {"flagged", flagged}};
  if (failed < inputs.size()) {
    const DatasetStats all = total.result();
    writeStatsCsvRow(csv, "all", all);
    summary["stats"] = statsToJson(all);
  }
  csv.close();
  if (!csv) {
    throw Error("failed to write " + (cfg.io.outputDir / "stats.csv").string());
  }

  if (failed > 0) {
    result.exitCode = kExitError;
    result.message = std::to_string(failed) + " of " + std::to_string(inputs.size()) + " file(s) failed";
  } else if (flagged > 0) {
    result.exitCode = kExitWarnings;
    result.message = std::to_string(flagged) + " file(s) completed with flagged corrections";
  } else {
    result.message = std::to_string(inputs.size()) + " file(s) processed";
  }
  summary["exit_code"] = result.exitCode;
  summary["message"] = result.message;
  writeJsonFile(cfg.io.outputDir / "pipeline_summary.json", summary);
  return result;
}

}  // namespace motion_forge
