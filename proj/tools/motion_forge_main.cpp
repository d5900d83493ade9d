#include "motion_forge/augment.hpp"
#include "motion_forge/config.hpp"
#include "motion_forge/height_correction.hpp"
#include "motion_forge/motion_io.hpp"
#include "motion_forge/pipeline.hpp"
#include "motion_forge/rewards.hpp"
#include "motion_forge/sampling.hpp"
#include "motion_forge/smoothing.hpp"
#include "motion_forge/stats.hpp"
#include "motion_forge/termination.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace mf = motion_forge;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string input;
  std::string inputDir;
  std::string output;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::string format;  // json or csv; inferred from the output extension when empty

  std::string report;
  std::string window;
  std::optional<int> order;
  std::string robot;
  std::string reference;
  bool terminate = false;
  std::string recoveryMode = "auto";
  std::string pool;
  std::size_t count = 1000;
};

void setupLogging() {
  auto logger = spdlog::stderr_logger_mt("motion-forge");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("MOTION_FORGE_LOG"); env != nullptr && *env != '\0') {
    const std::string name(env);
    level = spdlog::level::from_str(name);
    if (level == spdlog::level::off && name != "off") {
      level = spdlog::level::warn;
      spdlog::warn("MOTION_FORGE_LOG: unknown level '{}', using warn", name);
    }
  }
  spdlog::set_level(level);
}

mf::PipelineConfig loadConfig(const Options& opt) {
  mf::PipelineConfig cfg = opt.config.empty() ? mf::PipelineConfig{} : mf::loadPipelineConfig(opt.config);
  if (opt.seed) {
    cfg.sampling.sampler.seed = *opt.seed;
  }
  if (opt.jobs) {
    if (*opt.jobs == 0) {
      throw mf::Error("--jobs must be positive");
    }
    cfg.io.jobs = *opt.jobs;
  }
  if (!opt.window.empty()) {
    if (opt.window == "adaptive") {
      cfg.smoothing.window.reset();
    } else {
      try {
        std::size_t used = 0;
        cfg.smoothing.window = std::stoi(opt.window, &used);
        if (used != opt.window.size()) {
          throw std::invalid_argument(opt.window);
        }
      } catch (const std::logic_error&) {
        throw mf::Error("--window: expected an odd integer or 'adaptive', got '" + opt.window + "'");
      }
    }
  }
  if (opt.order) {
    cfg.smoothing.order = *opt.order;
  }
  cfg.validate();
  return cfg;
}

void requireOutput(const Options& opt) {
  if (opt.output.empty()) {
    throw mf::Error("--output is required");
  }
}

void writeText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw mf::Error("failed to write " + path.string());
  }
}

void writeSequence(const Options& opt, const mf::MotionDocument& doc) {
  if (opt.format == "csv") {
    std::ostringstream csv;
    mf::writeMotionCsv(csv, doc.sequence);
    writeText(opt.output, csv.str());
  } else {
    mf::writeMotionFile(opt.output, doc);
  }
}

std::vector<fs::path> inputFiles(const Options& opt) {
  if (!opt.inputDir.empty()) {
    return mf::listMotionFiles(opt.inputDir);
  }
  if (!opt.input.empty()) {
    return {fs::path(opt.input)};
  }
  throw mf::Error("--input or --input-dir is required");
}

mf::MotionDocument singleInput(const Options& opt) {
  if (opt.input.empty()) {
    throw mf::Error("--input is required");
  }
  return mf::readMotionFile(opt.input);
}

int runCorrect(const Options& opt) {
  requireOutput(opt);
  const mf::PipelineConfig cfg = loadConfig(opt);
  mf::MotionDocument doc = singleInput(opt);
  mf::CorrectionResult result = mf::correctRootHeight(doc.sequence, doc.skeleton, cfg.correction);
  spdlog::info("correct: {} frames, {} jump segment(s), {} flagged segment(s)", doc.sequence.size(),
               result.report.jumpSegments.size(), result.report.flags.size());
  doc.sequence = std::move(result.sequence);
  writeSequence(opt, doc);
  if (!opt.report.empty()) {
    mf::writeJsonFile(opt.report, mf::correctionReportToJson(result.report));
  }
  return result.report.flagged() ? mf::kExitWarnings : mf::kExitOk;
}

int runSmooth(const Options& opt) {
  requireOutput(opt);
  const mf::PipelineConfig cfg = loadConfig(opt);
  mf::MotionDocument doc = singleInput(opt);
  doc.sequence = mf::smoothSequence(doc.sequence, cfg.smoothing, cfg.channels);
  writeSequence(opt, doc);
  return mf::kExitOk;
}

int runStats(const Options& opt) {
  requireOutput(opt);
  const std::vector<fs::path> files = inputFiles(opt);
  if (files.empty()) {
    throw mf::Error("no input sequences");
  }
  mf::StatsAccumulator total;
  std::vector<std::pair<std::string, mf::DatasetStats>> rows;
  for (const fs::path& file : files) {
    const mf::PoseSequence seq = mf::readMotionFile(file).sequence;
    mf::StatsAccumulator one;
    one.add(seq);
    total.merge(one);
    if (seq.size() >= 2) {
      rows.emplace_back(file.stem().string(), one.result());
    }
  }
  const mf::DatasetStats all = total.result();
  const std::string dataset =
      opt.inputDir.empty() ? fs::path(opt.input).stem().string() : fs::path(opt.inputDir).lexically_normal().filename().string();
  if (opt.format == "csv") {
    std::ostringstream csv;
    mf::writeStatsCsvHeader(csv);
    mf::writeStatsCsvRow(csv, dataset.empty() ? "all" : dataset, all);
    writeText(opt.output, csv.str());
  } else {
    nlohmann::json j = {{"dataset", dataset}, {"stats", mf::statsToJson(all)}};
    for (const auto& [name, stats] : rows) {
      j["sequences"][name] = mf::statsToJson(stats);
    }
    mf::writeJsonFile(opt.output, j);
  }
  return all.skippedSequences > 0 ? mf::kExitWarnings : mf::kExitOk;
}

int runAnchors(const Options& opt) {
  requireOutput(opt);
  const mf::PipelineConfig cfg = loadConfig(opt);
  const mf::MotionDocument doc = singleInput(opt);
  const std::vector<double> energy = mf::kineticEnergyProxy(doc.sequence);
  const mf::AnchorSampler sampler(mf::detectAnchors(energy, cfg.sampling.plateauTolerance),
                                  cfg.sampling.sampler);
  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "anchor,weight\n";
    for (std::size_t k = 0; k < sampler.anchors().size(); ++k) {
      csv << sampler.anchors()[k] << ',' << mf::formatNumber(sampler.weights()[k]) << '\n';
    }
    writeText(opt.output, csv.str());
  } else {
    mf::writeJsonFile(opt.output, sampler.toJson());
  }
  return mf::kExitOk;
}

struct FrameEval {
  mf::RewardReport tracking;
  mf::RewardReport recovery;  // filled only while recovery is active
  bool recoveryActive = false;
  double total = 0.0;
  bool bad = false;
};

int runRewardEval(const Options& opt) {
  requireOutput(opt);
  if (opt.robot.empty() || opt.reference.empty()) {
    throw mf::Error("--robot and --reference are required");
  }
  const mf::PipelineConfig cfg = loadConfig(opt);
  const mf::MotionDocument robot = mf::readMotionFile(opt.robot);
  const mf::MotionDocument reference = mf::readMotionFile(opt.reference);
  const mf::SkeletonSpec& skeleton = reference.skeleton;
  if (robot.skeleton.bodies.size() != skeleton.bodies.size() ||
      robot.skeleton.dofCount() != skeleton.dofCount()) {
    throw mf::Error("robot and reference skeletons do not match");
  }
  if (robot.sequence.size() != reference.sequence.size()) {
    throw mf::Error("robot has " + std::to_string(robot.sequence.size()) + " frames, reference has " +
                    std::to_string(reference.sequence.size()));
  }
  const auto robotKin = mf::bodyKinematics(robot.sequence, skeleton);
  const auto refKin = mf::bodyKinematics(reference.sequence, skeleton);

  std::vector<FrameEval> evals;
  std::optional<std::size_t> terminationFrame;
  mf::TerminationState state;
  for (std::size_t t = 0; t < robot.sequence.size(); ++t) {
    const std::size_t prev = t == 0 ? 0 : t - 1;
    mf::TrackingPair pair{{robot.sequence.frames[t], robotKin[t]},
                          {reference.sequence.frames[t], refKin[t]},
                          robot.sequence.frames[t].jointPos,
                          robot.sequence.frames[prev].jointPos,
                          mf::centerOfMass(skeleton, robotKin[prev].positions).head<2>()};
    FrameEval e;
    e.tracking = mf::evalTrackingRewards(pair, skeleton, cfg.rewards);
    if (opt.recoveryMode == "on") {
      e.recoveryActive = true;
    } else if (opt.recoveryMode == "auto") {
      e.recoveryActive = mf::recoveryIndicator(pair, skeleton, cfg.rewards);
    }
    e.total = e.tracking.total;
    if (e.recoveryActive) {
      e.recovery = mf::evalRecoveryRewards(pair, skeleton, cfg.rewards);
      e.total += e.recovery.total;
    }
    if (opt.terminate && !state.terminated) {
      const mf::BadTrackingFlags flags = mf::evalBadTracking(pair, cfg.termination);
      e.bad = flags.any();
      state = mf::stepTermination(state, flags, e.recoveryActive, cfg.termination);
      if (state.terminated) {
        terminationFrame = t;
      }
    }
    evals.push_back(std::move(e));
  }

  std::size_t unavailable = 0;
  for (const mf::RewardTerm& term : evals.empty() ? std::vector<mf::RewardTerm>{} : evals.front().tracking.terms) {
    if (!term.available) {
      spdlog::warn("reward term '{}' unavailable (missing inputs), excluded from totals", term.name);
      ++unavailable;
    }
  }

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << "frame,recovery_active";
    for (const std::string_view name : mf::kTrackingTerms) {
      csv << ',' << name;
    }
    for (const std::string_view name : mf::kRecoveryTerms) {
      csv << ',' << name;
    }
    csv << ",total";
    if (opt.terminate) {
      csv << ",bad,terminated";
    }
    csv << '\n';
    for (std::size_t t = 0; t < evals.size(); ++t) {
      const FrameEval& e = evals[t];
      csv << t << ',' << (e.recoveryActive ? 1 : 0);
      for (const mf::RewardTerm& term : e.tracking.terms) {
        csv << ',';
        if (term.available) {
          csv << mf::formatNumber(term.weighted);
        }
      }
      for (const std::string_view name : mf::kRecoveryTerms) {
        csv << ',' << mf::formatNumber(e.recoveryActive ? e.recovery.term(name).weighted : 0.0);
      }
      csv << ',' << mf::formatNumber(e.total);
      if (opt.terminate) {
        csv << ',' << (e.bad ? 1 : 0) << ',' << (terminationFrame && t >= *terminationFrame ? 1 : 0);
      }
      csv << '\n';
    }
    writeText(opt.output, csv.str());
  } else {
    nlohmann::json frames = nlohmann::json::array();
    for (std::size_t t = 0; t < evals.size(); ++t) {
      const FrameEval& e = evals[t];
      nlohmann::json terms;
      const auto addTerms = [&terms](const mf::RewardReport& report) {
        for (const mf::RewardTerm& term : report.terms) {
          terms[term.name] = {{"raw", term.raw},
                              {"weight", term.weight},
                              {"weighted", term.weighted},
                              {"available", term.available}};
        }
      };
      addTerms(e.tracking);
      if (e.recoveryActive) {
        addTerms(e.recovery);
      }
      nlohmann::json row = {{"frame", t}, {"recovery_active", e.recoveryActive}, {"terms", terms}, {"total", e.total}};
      if (opt.terminate) {
        row["bad"] = e.bad;
      }
      frames.push_back(std::move(row));
    }
    nlohmann::json j = {{"frames", std::move(frames)}};
    if (opt.terminate) {
      j["termination_frame"] = terminationFrame ? nlohmann::json(*terminationFrame) : nlohmann::json();
    }
    mf::writeJsonFile(opt.output, j);
  }
  if (opt.terminate) {
    std::cout << "termination_frame: " << (terminationFrame ? std::to_string(*terminationFrame) : "none")
              << '\n';
  }
  return unavailable > 0 ? mf::kExitWarnings : mf::kExitOk;
}

mf::PosePool loadPool(const fs::path& path, std::optional<mf::SkeletonSpec>& skeleton,
                      double& fps) {
  mf::PosePool pool;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    files = mf::listMotionFiles(path);
  } else {
    files.push_back(path);
  }
  for (const fs::path& file : files) {
    mf::MotionDocument doc = mf::readMotionFile(file);
    if (!skeleton) {
      skeleton = doc.skeleton;
      fps = doc.sequence.fps;
    }
    for (std::size_t i = 0; i < doc.sequence.size(); ++i) {
      pool.poses.push_back(doc.sequence.frames[i]);
      std::string tag = i < doc.frameTags.size() ? doc.frameTags[i] : std::string();
      if (tag.empty()) {
        tag = file.stem().string() + "#" + std::to_string(i);
      }
      pool.sourceTags.push_back(std::move(tag));
    }
  }
  return pool;
}

int runAugment(const Options& opt) {
  requireOutput(opt);
  const std::string poolPath = !opt.pool.empty() ? opt.pool : !opt.input.empty() ? opt.input : opt.inputDir;
  if (poolPath.empty()) {
    throw mf::Error("--pool is required");
  }
  std::optional<mf::SkeletonSpec> skeleton;
  double fps = 50.0;
  const mf::PosePool pool = loadPool(poolPath, skeleton, fps);
  if (!skeleton) {
    throw mf::Error("pose pool is empty");
  }
  const std::uint64_t seed = opt.seed.value_or(0);
  const std::vector<mf::AugmentedPose> poses = mf::recombine(pool, opt.count, *skeleton, seed);
  mf::MotionDocument doc;
  doc.skeleton = *skeleton;
  doc.sequence.fps = fps;
  doc.sequence.skeletonId = skeleton->name;
  for (const mf::AugmentedPose& p : poses) {
    doc.sequence.frames.push_back(p.frame);
    doc.frameTags.push_back(pool.sourceTags[p.orientationSource] + "|" + pool.sourceTags[p.jointSource]);
  }
  writeSequence(opt, doc);
  return mf::kExitOk;
}

int runPipelineCommand(const Options& opt) {
  mf::PipelineConfig cfg = loadConfig(opt);
  if (!opt.inputDir.empty()) {
    cfg.io.inputDir = opt.inputDir;
  }
  if (!opt.output.empty()) {
    cfg.io.outputDir = opt.output;
  }
  if (cfg.io.inputDir.empty() || cfg.io.outputDir.empty()) {
    throw mf::Error("pipeline needs an input directory and an output directory");
  }
  const mf::PipelineResult result = mf::runPipeline(cfg);
  if (result.exitCode == mf::kExitOk) {
    std::cout << result.message << '\n';
  } else {
    std::cerr << result.message << '\n';
  }
  return result.exitCode;
}

}  // namespace

int main(int argc, char** argv) {
  setupLogging();
  CLI::App app{"Correct, smooth, analyze, sample and score humanoid motion sequences"};
  app.require_subcommand(1);
  Options opt;

  const auto common = [&opt](CLI::App* cmd) {
    cmd->add_option("--input", opt.input, "Input motion file");
    cmd->add_option("--input-dir", opt.inputDir, "Directory of motion files");
    cmd->add_option("--output", opt.output, "Output path");
    cmd->add_option("--config", opt.config, "TOML config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", opt.seed, "Random seed");
    cmd->add_option("--jobs", opt.jobs, "Parallel workers");
    cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* correct = app.add_subcommand("correct", "Root height drift correction");
  common(correct);
  correct->add_option("--report", opt.report, "Correction report (JSON)");
  auto* smooth = app.add_subcommand("smooth", "Savitzky-Golay smoothing");
  common(smooth);
  smooth->add_option("--window", opt.window, "Odd window length or 'adaptive'");
  smooth->add_option("--order", opt.order, "Polynomial order");
  auto* stats = app.add_subcommand("stats", "Dataset velocity statistics");
  common(stats);
  auto* anchors = app.add_subcommand("anchors", "Low kinetic energy anchors and sampler state");
  common(anchors);
  auto* rewards = app.add_subcommand("reward-eval", "Per-frame tracking and recovery rewards");
  common(rewards);
  rewards->add_option("--robot", opt.robot, "Robot motion file");
  rewards->add_option("--reference", opt.reference, "Reference motion file");
  rewards->add_flag("--terminate", opt.terminate, "Run the bad-tracking termination state machine");
  rewards->add_option("--recovery-mode", opt.recoveryMode, "Recovery indicator source")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  auto* augment = app.add_subcommand("augment", "Fall pose recombination");
  common(augment);
  augment->add_option("--pool", opt.pool, "Pose pool file or directory");
  augment->add_option("--count", opt.count, "Number of poses");
  auto* pipeline = app.add_subcommand("pipeline", "Batch correct, smooth, stats and anchors");
  common(pipeline);
  pipeline->add_option("--window", opt.window, "Odd window length or 'adaptive'");
  pipeline->add_option("--order", opt.order, "Polynomial order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? mf::kExitOk : mf::kExitError;
  }
  if (opt.format.empty()) {
    opt.format = fs::path(opt.output).extension() == ".csv" ? "csv" : "json";
  }
  if (opt.format == "csv" && pipeline->parsed()) {
    std::cerr << "error: pipeline writes JSON and CSV artifacts; --format is not supported\n";
    return mf::kExitError;
  }

  try {
    if (correct->parsed()) return runCorrect(opt);
    if (smooth->parsed()) return runSmooth(opt);
    if (stats->parsed()) return runStats(opt);
    if (anchors->parsed()) return runAnchors(opt);
    if (rewards->parsed()) return runRewardEval(opt);
    if (augment->parsed()) return runAugment(opt);
    if (pipeline->parsed()) return runPipelineCommand(opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return mf::kExitError;
  }
  return mf::kExitError;
}
