#include "motion_forge/augment.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

namespace motion_forge {

std::vector<AugmentedPose> recombine(const PosePool& pool, std::size_t count,
                                     const SkeletonSpec& skeleton, Rng& rng) {
  if (pool.poses.empty()) {
    throw Error("pose pool is empty");
  }
  const auto dof = static_cast<Eigen::Index>(skeleton.dofCount());
  for (std::size_t i = 0; i < pool.poses.size(); ++i) {
    if (pool.poses[i].jointPos.size() != dof) {
      throw Error("pool pose " + std::to_string(i) + " has " +
                  std::to_string(pool.poses[i].jointPos.size()) + " joints, skeleton has " +
                  std::to_string(dof));
    }
  }

  std::vector<AugmentedPose> out;
  out.reserve(count);
  std::size_t clampedTotal = 0;
  for (std::size_t n = 0; n < count; ++n) {
    AugmentedPose pose;
    pose.orientationSource = rng.index(pool.poses.size());
    pose.jointSource = rng.index(pool.poses.size());
    Frame& f = pose.frame;
    f.rootQuat = pool.poses[pose.orientationSource].rootQuat.normalized();
    f.jointPos = pool.poses[pose.jointSource].jointPos;
    for (Eigen::Index j = 0; j < dof; ++j) {
      const JointLimit& lim = skeleton.jointLimits[static_cast<std::size_t>(j)];
      const double clamped = std::clamp(f.jointPos[j], lim.lower, lim.upper);
      if (clamped != f.jointPos[j]) {
        f.jointPos[j] = clamped;
        ++pose.clampedJoints;
      }
    }
    f.rootPos = Eigen::Vector3d::Zero();
    f.rootPos.z() = -minBodyHeight(f, skeleton);
    clampedTotal += pose.clampedJoints;
    out.push_back(std::move(pose));
  }
  if (clampedTotal > 0) {
    spdlog::info("recombine: clamped {} joint value(s) into skeleton limits", clampedTotal);
  }
  return out;
}

std::vector<AugmentedPose> recombine(const PosePool& pool, std::size_t count,
                                     const SkeletonSpec& skeleton, std::uint64_t seed) {
  Rng rng(seed);
  return recombine(pool, count, skeleton, rng);
}

}  // namespace motion_forge
