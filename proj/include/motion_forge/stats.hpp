#pragma once

#include "motion_forge/motion.hpp"

#include <cstddef>
#include <span>

namespace motion_forge {

/// Kinematic dataset statistics.
///
/// All velocity metrics are SIGNED means of raw per-frame forward differences
/// (not magnitudes, not per-second): joint velocity averages every joint
/// channel, root linear and angular velocity average the three axis channels.
/// Only the T - 1 genuine differences of a T-frame sequence contribute, so
/// sequences are effectively weighted by their number of differences.
struct DatasetStats {
  double fps = 0.0;                  // mean of sequence frame rates
  double meanJointVel = 0.0;         // rad/frame
  double meanBodyLinVel = 0.0;       // m/frame, averaged over x, y, z
  Eigen::Vector3d meanBodyLinVelAxis = Eigen::Vector3d::Zero();
  double meanBodyAngVel = 0.0;       // rad/frame, averaged over x, y, z
  Eigen::Vector3d meanBodyAngVelAxis = Eigen::Vector3d::Zero();
  double meanFrames = 0.0;
  std::size_t sequenceCount = 0;
  std::size_t skippedSequences = 0;
};

/// Running sums behind DatasetStats; merge() is associative, so per-sequence
/// accumulators can be reduced in any grouping.
class StatsAccumulator {
 public:
  /// Adds one sequence. Sequences with fewer than 2 frames are counted as
  /// skipped and otherwise ignored.
  void add(const PoseSequence& seq);
  void merge(const StatsAccumulator& other);

  /// Throws Error when no usable sequence was added.
  DatasetStats result() const;

 private:
  double jointSum_ = 0.0;
  std::size_t jointCount_ = 0;
  Eigen::Vector3d linSum_ = Eigen::Vector3d::Zero();
  Eigen::Vector3d angSum_ = Eigen::Vector3d::Zero();
  std::size_t diffCount_ = 0;
  std::size_t frames_ = 0;
  double fpsSum_ = 0.0;
  std::size_t sequences_ = 0;
  std::size_t skipped_ = 0;
};

DatasetStats computeStats(std::span<const PoseSequence> seqs, const SkeletonSpec& skeleton);

}  // namespace motion_forge
