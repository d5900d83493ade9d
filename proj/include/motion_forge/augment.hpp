#pragma once

#include "motion_forge/motion.hpp"
#include "motion_forge/random.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace motion_forge {

/// Externally generated fall poses (root position, root orientation, joints).
struct PosePool {
  std::vector<Frame> poses;
  std::vector<std::string> sourceTags;  // one per pose, may be empty strings
};

struct AugmentedPose {
  Frame frame;
  std::size_t orientationSource = 0;
  std::size_t jointSource = 0;
  std::size_t clampedJoints = 0;
};

/// Builds `count` poses, each taking its root orientation from one uniformly
/// drawn pool pose and its joint angles from another independent draw. Joint
/// angles are clamped into the skeleton limits; the root is placed at x = y = 0
/// with its height chosen so the lowest body touches the ground.
std::vector<AugmentedPose> recombine(const PosePool& pool, std::size_t count,
                                     const SkeletonSpec& skeleton, Rng& rng);

std::vector<AugmentedPose> recombine(const PosePool& pool, std::size_t count,
                                     const SkeletonSpec& skeleton, std::uint64_t seed);

}  // namespace motion_forge
