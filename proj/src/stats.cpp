#include "motion_forge/stats.hpp"

#include <spdlog/spdlog.h>

namespace motion_forge {

void StatsAccumulator::add(const PoseSequence& seq) {
  if (seq.frames.size() < 2) {
    spdlog::warn("stats: skipping sequence '{}' with {} frame(s)", seq.skeletonId,
                 seq.frames.size());
    ++skipped_;
    return;
  }
  const Velocities v = finiteDifferenceVelocities(seq, VelocityUnits::PerFrame);
  const std::size_t diffs = seq.frames.size() - 1;
  for (std::size_t t = 0; t < diffs; ++t) {
    jointSum_ += v.joint[t].sum();
    jointCount_ += static_cast<std::size_t>(v.joint[t].size());
    linSum_ += v.rootLinear[t];
    angSum_ += v.rootAngular[t];
  }
  diffCount_ += diffs;
  frames_ += seq.frames.size();
  fpsSum_ += seq.fps;
  ++sequences_;
}

void StatsAccumulator::merge(const StatsAccumulator& other) {
  jointSum_ += other.jointSum_;
  jointCount_ += other.jointCount_;
  linSum_ += other.linSum_;
  angSum_ += other.angSum_;
  diffCount_ += other.diffCount_;
  frames_ += other.frames_;
  fpsSum_ += other.fpsSum_;
  sequences_ += other.sequences_;
  skipped_ += other.skipped_;
}

DatasetStats StatsAccumulator::result() const {
  if (sequences_ == 0) {
    throw Error("stats: no sequence with at least 2 frames");
  }
  DatasetStats s;
  const auto diffs = static_cast<double>(diffCount_);
  s.fps = fpsSum_ / static_cast<double>(sequences_);
  s.meanJointVel = jointCount_ > 0 ? jointSum_ / static_cast<double>(jointCount_) : 0.0;
  s.meanBodyLinVelAxis = linSum_ / diffs;
  s.meanBodyLinVel = s.meanBodyLinVelAxis.mean();
  s.meanBodyAngVelAxis = angSum_ / diffs;
  s.meanBodyAngVel = s.meanBodyAngVelAxis.mean();
  s.meanFrames = static_cast<double>(frames_) / static_cast<double>(sequences_);
  s.sequenceCount = sequences_;
  s.skippedSequences = skipped_;
  return s;
}

DatasetStats computeStats(std::span<const PoseSequence> seqs, const SkeletonSpec& skeleton) {
  if (seqs.empty()) {
    throw Error("stats: empty sequence collection");
  }
  StatsAccumulator acc;
  for (const PoseSequence& seq : seqs) {
    validateSequence(seq, skeleton);
    acc.add(seq);
  }
  return acc.result();
}

}  // namespace motion_forge
