#include "motion_forge/motion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace motion_forge {

std::span<const std::size_t> SkeletonSpec::bodySet(std::string_view setName) const {
  const auto it = bodySets.find(std::string(setName));
  if (it == bodySets.end()) {
    return {};
  }
  return it->second;
}

std::vector<int> SkeletonSpec::jointOfBody() const {
  std::vector<int> out(bodies.size(), -1);
  for (std::size_t j = 0; j < dofMap.size(); ++j) {
    if (dofMap[j] < out.size()) {
      out[dofMap[j]] = static_cast<int>(j);
    }
  }
  return out;
}

std::vector<std::size_t> SkeletonSpec::jointsInSet(std::string_view setName) const {
  const auto set = bodySet(setName);
  std::vector<std::size_t> joints;
  for (std::size_t j = 0; j < dofMap.size(); ++j) {
    if (std::find(set.begin(), set.end(), dofMap[j]) != set.end()) {
      joints.push_back(j);
    }
  }
  return joints;
}

std::optional<std::size_t> SkeletonSpec::findBody(std::string_view bodyName) const {
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    if (bodies[i].name == bodyName) {
      return i;
    }
  }
  return std::nullopt;
}

void SkeletonSpec::validate() const {
  if (bodies.empty()) {
    throw Error("skeleton '" + name + "' has no bodies");
  }
  if (bodies.front().parent) {
    throw Error("skeleton '" + name + "': body 0 must be the root");
  }
  if (bodies.front().jointAxis) {
    throw Error("skeleton '" + name + "': the root body cannot carry a joint axis");
  }
  for (std::size_t i = 1; i < bodies.size(); ++i) {
    const Body& b = bodies[i];
    if (!b.parent) {
      throw Error("skeleton '" + name + "': body '" + b.name + "' is a second root");
    }
    if (*b.parent >= i) {
      throw Error("skeleton '" + name + "': parent of body '" + b.name +
                  "' must precede it (topological order)");
    }
    if (b.jointAxis && std::abs(b.jointAxis->norm() - 1.0) > 1e-9) {
      throw Error("skeleton '" + name + "': joint axis of '" + b.name + "' is not unit length");
    }
    if (!(b.mass >= 0.0)) {
      throw Error("skeleton '" + name + "': body '" + b.name + "' has negative mass");
    }
  }
  std::set<std::size_t> seen;
  for (std::size_t j = 0; j < dofMap.size(); ++j) {
    const std::size_t body = dofMap[j];
    if (body >= bodies.size()) {
      throw Error("skeleton '" + name + "': dof_map[" + std::to_string(j) + "] out of range");
    }
    if (!bodies[body].jointAxis) {
      throw Error("skeleton '" + name + "': dof_map[" + std::to_string(j) + "] maps to fixed body '" +
                  bodies[body].name + "'");
    }
    if (!seen.insert(body).second) {
      throw Error("skeleton '" + name + "': body '" + bodies[body].name +
                  "' is driven by two joints");
    }
  }
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    if (bodies[i].jointAxis && !seen.contains(i)) {
      throw Error("skeleton '" + name + "': jointed body '" + bodies[i].name +
                  "' is missing from dof_map");
    }
  }
  if (jointLimits.size() != dofMap.size()) {
    throw Error("skeleton '" + name + "': expected " + std::to_string(dofMap.size()) +
                " joint limits, got " + std::to_string(jointLimits.size()));
  }
  for (std::size_t j = 0; j < jointLimits.size(); ++j) {
    if (!(jointLimits[j].lower <= jointLimits[j].upper)) {
      throw Error("skeleton '" + name + "': joint " + std::to_string(j) + " has lower > upper");
    }
  }
  for (const auto& [setName, members] : bodySets) {
    for (const std::size_t b : members) {
      if (b >= bodies.size()) {
        throw Error("skeleton '" + name + "': body set '" + setName + "' references body " +
                    std::to_string(b) + " which does not exist");
      }
    }
  }
}

void assignDefaultDofMap(SkeletonSpec& skeleton) {
  skeleton.dofMap.clear();
  for (std::size_t i = 0; i < skeleton.bodies.size(); ++i) {
    if (skeleton.bodies[i].jointAxis) {
      skeleton.dofMap.push_back(i);
    }
  }
  if (skeleton.jointLimits.empty()) {
    const double inf = std::numeric_limits<double>::infinity();
    skeleton.jointLimits.assign(skeleton.dofMap.size(), JointLimit{-inf, inf});
  }
}

std::vector<double> PoseSequence::rootHeights() const {
  std::vector<double> z(frames.size());
  for (std::size_t t = 0; t < frames.size(); ++t) {
    z[t] = frames[t].rootPos.z();
  }
  return z;
}

void validateSequence(const PoseSequence& seq, const SkeletonSpec& skeleton) {
  if (!(seq.fps > 0.0) || !std::isfinite(seq.fps)) {
    throw Error("sequence fps must be positive");
  }
  if (seq.frames.empty()) {
    throw Error("sequence has no frames");
  }
  const auto dof = static_cast<Eigen::Index>(skeleton.dofCount());
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const Frame& f = seq.frames[t];
    const std::string where = "frame " + std::to_string(t) + ": ";
    if (f.jointPos.size() != dof) {
      throw Error(where + "joint_pos has " + std::to_string(f.jointPos.size()) +
                  " entries, skeleton has " + std::to_string(dof) + " DOF");
    }
    if (f.jointVel && f.jointVel->size() != dof) {
      throw Error(where + "joint_vel length does not match the DOF count");
    }
    if (!isUnit(f.rootQuat, 1e-6)) {
      throw Error(where + "root quaternion is not unit norm");
    }
    if (f.bodyPos && f.bodyPos->size() != skeleton.bodyCount()) {
      throw Error(where + "body_pos length does not match the body count");
    }
    if (f.bodyForce && static_cast<std::size_t>(f.bodyForce->size()) != skeleton.bodyCount()) {
      throw Error(where + "body_force length does not match the body count");
    }
  }
}

BodyPoses forwardKinematics(const Frame& frame, const SkeletonSpec& skeleton) {
  BodyPoses out;
  static_cast<BodyPosesT<double>&>(out) =
      forwardKinematics<double>(skeleton, frame.rootPos, frame.rootQuat, frame.jointPos);
  if (frame.bodyPos) {
    const auto& cached = *frame.bodyPos;
    if (cached.size() != out.positions.size()) {
      out.cacheStale = true;
    } else {
      for (std::size_t i = 0; i < cached.size(); ++i) {
        if ((cached[i] - out.positions[i]).cwiseAbs().maxCoeff() > 1e-9) {
          out.cacheStale = true;
          break;
        }
      }
    }
  }
  return out;
}

BodyPoses forwardKinematics(const PoseSequence& seq, const SkeletonSpec& skeleton,
                            std::size_t frameIndex) {
  if (frameIndex >= seq.frames.size()) {
    throw Error("frame index " + std::to_string(frameIndex) + " out of range (" +
                std::to_string(seq.frames.size()) + " frames)");
  }
  return forwardKinematics(seq.frames[frameIndex], skeleton);
}

double bodyHeight(const SkeletonSpec& skeleton, const BodyPosesT<double>& poses, std::size_t i) {
  return poses.positions[i].z() + skeleton.bodies[i].heightOffset;
}

double minBodyHeight(const SkeletonSpec& skeleton, const BodyPosesT<double>& poses) {
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poses.positions.size(); ++i) {
    lowest = std::min(lowest, bodyHeight(skeleton, poses, i));
  }
  return lowest;
}

double minBodyHeight(const PoseSequence& seq, const SkeletonSpec& skeleton, std::size_t frameIndex) {
  return minBodyHeight(skeleton, forwardKinematics(seq, skeleton, frameIndex));
}

double minBodyHeight(const Frame& frame, const SkeletonSpec& skeleton) {
  return minBodyHeight(skeleton, forwardKinematics(frame, skeleton));
}

Velocities finiteDifferenceVelocities(const PoseSequence& seq, VelocityUnits units) {
  const std::size_t n = seq.frames.size();
  if (n < 2) {
    throw Error("finite differences need at least 2 frames, got " + std::to_string(n));
  }
  const double scale = units == VelocityUnits::PerSecond ? seq.fps : 1.0;
  Velocities v;
  v.joint.resize(n);
  v.rootLinear.resize(n);
  v.rootAngular.resize(n);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    const Frame& a = seq.frames[t];
    const Frame& b = seq.frames[t + 1];
    v.joint[t] = (b.jointPos - a.jointPos) * scale;
    v.rootLinear[t] = (b.rootPos - a.rootPos) * scale;
    v.rootAngular[t] = rotationVector<double>(b.rootQuat * a.rootQuat.conjugate()) * scale;
  }
  v.joint[n - 1] = v.joint[n - 2];
  v.rootLinear[n - 1] = v.rootLinear[n - 2];
  v.rootAngular[n - 1] = v.rootAngular[n - 2];
  return v;
}

PoseSequence reversed(const PoseSequence& seq) {
  PoseSequence out = seq;
  std::reverse(out.frames.begin(), out.frames.end());
  for (Frame& f : out.frames) {
    if (f.jointVel) {
      *f.jointVel = -*f.jointVel;
    }
  }
  return out;
}

}  // namespace motion_forge
