#include "motion_forge/pipeline.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace mftest;
namespace fs = std::filesystem;

namespace {

fs::path corpus(const std::string& name, bool withImaginary) {
  const fs::path dir = scratchDir(name);
  const mf::SkeletonSpec leg = legSkeleton();
  JumpScenario sc;
  sc.offset = 0.05;
  sc.drift = 1e-4;
  sc.noise = 0.002;
  mf::writeMotionFile(dir / "a_jump.json", document(leg, jumpSequence(sc)));
  mf::writeMotionFile(dir / "b_exact.json", document(leg, exactJump(0.1).sequence));
  if (withImaginary) {
    mf::writeMotionFile(dir / "c_imaginary.json", document(leg, imaginaryFlightSequence()));
  } else {
    sc.jumps = 2;
    sc.seed = 9;
    mf::writeMotionFile(dir / "c_double.json", document(leg, jumpSequence(sc)));
  }
  return dir;
}

mf::PipelineConfig configFor(const fs::path& in, const fs::path& out, unsigned jobs = 1) {
  mf::PipelineConfig cfg;
  cfg.io.inputDir = in;
  cfg.io.outputDir = out;
  cfg.io.jobs = jobs;
  cfg.sampling.sampler.seed = 17;
  return cfg;
}

}  // namespace

TEST(Pipeline, EmptyDirectoryFails) {
  const fs::path in = scratchDir("pipeline_empty");
  const mf::PipelineResult r = mf::runPipeline(configFor(in, scratchDir("pipeline_empty_out")));
  EXPECT_EQ(r.exitCode, mf::kExitError);
  EXPECT_EQ(r.message, "no input sequences");
  EXPECT_THROW(mf::listMotionFiles(in / "missing"), mf::Error);
}

TEST(Pipeline, FlaggedFileCompletesWithWarnings) {
  const fs::path in = corpus("pipeline_flagged", true);
  const fs::path out = scratchDir("pipeline_flagged_out");
  const mf::PipelineResult r = mf::runPipeline(configFor(in, out));
  EXPECT_EQ(r.exitCode, mf::kExitWarnings);
  ASSERT_EQ(r.files.size(), 3u);
  for (const mf::FileOutcome& f : r.files) {
    EXPECT_TRUE(f.ok) << f.name << ": " << f.error;
  }
  EXPECT_FALSE(r.files[0].flagged);
  EXPECT_TRUE(r.files[2].flagged);
  for (const std::string stem : {"a_jump", "b_exact", "c_imaginary"}) {
    EXPECT_TRUE(fs::exists(out / (stem + ".json")));
    EXPECT_TRUE(fs::exists(out / (stem + ".report.json")));
  }
  const nlohmann::json report = nlohmann::json::parse(readFile(out / "c_imaginary.report.json"));
  EXPECT_EQ(report.at("correction").at("flags")[0].at("issue"), "imaginary_flight_time");
  EXPECT_EQ(report.at("smoothing").at("order"), 3);
  EXPECT_EQ(report.at("anchors").at("sampler").at("anchors")[0], 0);

  const std::string csv = readFile(out / "stats.csv");
  EXPECT_EQ(csv.rfind("dataset,fps,joint_vel,body_lin_vel,body_ang_vel,frames\n", 0), 0u);
  EXPECT_NE(csv.find("\nall,"), std::string::npos);
  const nlohmann::json summary = nlohmann::json::parse(readFile(out / "pipeline_summary.json"));
  EXPECT_EQ(summary.at("exit_code"), 2);
  EXPECT_EQ(summary.at("flagged"), 1);
}

TEST(Pipeline, OutputsAreCorrectedThenSmoothed) {
  const fs::path in = corpus("pipeline_order", false);
  const fs::path out = scratchDir("pipeline_order_out");
  const mf::PipelineConfig cfg = configFor(in, out);
  ASSERT_EQ(mf::runPipeline(cfg).exitCode, mf::kExitOk);
  const mf::MotionDocument input = mf::readMotionFile(in / "b_exact.json");
  const mf::CorrectionResult corrected = mf::correctRootHeight(input.sequence, input.skeleton, cfg.correction);
  const mf::PoseSequence expected = mf::smoothSequence(corrected.sequence, cfg.smoothing, cfg.channels);
  const mf::MotionDocument got = mf::readMotionFile(out / "b_exact.json");
  ASSERT_EQ(got.sequence.size(), expected.size());
  for (std::size_t t = 0; t < expected.size(); ++t) {
    EXPECT_EQ(got.sequence.frames[t].rootPos, expected.frames[t].rootPos);
    EXPECT_EQ(got.sequence.frames[t].jointPos, expected.frames[t].jointPos);
  }
}

TEST(Pipeline, MalformedFileDoesNotAbortBatch) {
  const fs::path in = corpus("pipeline_malformed", false);
  {
    std::ofstream bad(in / "b_broken.json");
    bad << "{ not json";
  }
  const fs::path out = scratchDir("pipeline_malformed_out");
  const mf::PipelineResult r = mf::runPipeline(configFor(in, out, 3));
  EXPECT_EQ(r.exitCode, mf::kExitError);
  ASSERT_EQ(r.files.size(), 4u);
  EXPECT_EQ(r.files[1].name, "b_broken.json");
  EXPECT_FALSE(r.files[1].ok);
  EXPECT_FALSE(r.files[1].error.empty());
  EXPECT_TRUE(fs::exists(out / "c_double.json"));
  EXPECT_TRUE(fs::exists(out / "b_exact.report.json"));
  EXPECT_FALSE(fs::exists(out / "b_broken.report.json"));
}

TEST(Pipeline, DeterministicAcrossRunsAndJobCounts) {
  const fs::path in = corpus("pipeline_determinism", true);
  const fs::path a = scratchDir("pipeline_det_a");
  const fs::path b = scratchDir("pipeline_det_b");
  const fs::path c = scratchDir("pipeline_det_c");
  mf::runPipeline(configFor(in, a, 1));
  mf::runPipeline(configFor(in, b, 1));
  mf::runPipeline(configFor(in, c, 4));
  const auto sa = snapshotTree(a);
  EXPECT_EQ(sa.size(), 8u);
  EXPECT_EQ(sa, snapshotTree(b));
  EXPECT_EQ(sa, snapshotTree(c));
}
