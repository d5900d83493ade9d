#pragma once

#include "motion_forge/rotation.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace motion_forge {

/// Raised for malformed data, violated preconditions and unsatisfiable requests.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct JointLimit {
  double lower = 0.0;
  double upper = 0.0;
};

struct Body {
  std::string name;
  std::optional<std::size_t> parent;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
  // Revolute axis in the parent-offset frame; empty for fixed bodies.
  std::optional<Eigen::Vector3d> jointAxis;
  double mass = 1.0;
  // Added to the origin z when measuring ground clearance, e.g. a negative
  // value approximates the sole below an ankle origin.
  double heightOffset = 0.0;
};

/// Articulated tree of point bodies. Bodies are topologically sorted: the
/// parent of body i has an index strictly less than i, and body 0 is the root.
struct SkeletonSpec {
  std::string name;
  std::vector<Body> bodies;
  std::vector<std::size_t> dofMap;  // joint index -> body index
  std::map<std::string, std::vector<std::size_t>> bodySets;
  std::vector<JointLimit> jointLimits;  // one per joint

  std::size_t bodyCount() const { return bodies.size(); }
  std::size_t dofCount() const { return dofMap.size(); }

  /// Body indices of a named set, or an empty span when the set is absent.
  std::span<const std::size_t> bodySet(std::string_view setName) const;

  /// Joint driving each body, -1 for fixed bodies and the root.
  std::vector<int> jointOfBody() const;

  /// Joints whose driven body belongs to the named set, in joint order.
  std::vector<std::size_t> jointsInSet(std::string_view setName) const;

  std::optional<std::size_t> findBody(std::string_view bodyName) const;

  /// Throws Error describing the first violated structural invariant.
  void validate() const;
};

/// Fills dofMap with every jointed body in index order and gives each joint
/// unbounded limits when none are present.
void assignDefaultDofMap(SkeletonSpec& skeleton);

struct Frame {
  Eigen::Vector3d rootPos = Eigen::Vector3d::Zero();
  Eigen::Quaterniond rootQuat = Eigen::Quaterniond::Identity();
  Eigen::VectorXd jointPos;
  std::optional<Eigen::VectorXd> jointVel;
  // Cached forward kinematics output; advisory only.
  std::optional<std::vector<Eigen::Vector3d>> bodyPos;
  // Vertical contact force per foot (N), ordered like the "feet" body set.
  std::optional<Eigen::VectorXd> contactForce;
  // Vertical contact force per body (N), indexed by body.
  std::optional<Eigen::VectorXd> bodyForce;
};

struct PoseSequence {
  double fps = 0.0;
  std::vector<Frame> frames;
  std::string skeletonId;

  std::size_t size() const { return frames.size(); }

  std::vector<double> rootHeights() const;
};

/// Checks every PoseSequence invariant against the skeleton.
void validateSequence(const PoseSequence& seq, const SkeletonSpec& skeleton);

template <typename Scalar>
struct BodyPosesT {
  std::vector<Vec3<Scalar>> positions;
  std::vector<Quat<Scalar>> orientations;
};

struct BodyPoses : BodyPosesT<double> {
  // Set when the frame carried cached body positions that disagree with the
  // recomputed ones by more than 1e-9.
  bool cacheStale = false;
};

/// World pose of every body: the root pose composed along the chain of fixed
/// offsets and joint rotations. Each body frame is its parent frame translated
/// by the body offset and then rotated about the joint axis.
template <typename Scalar>
BodyPosesT<Scalar> forwardKinematics(const SkeletonSpec& skeleton, const Vec3<Scalar>& rootPos,
                                     const Quat<Scalar>& rootQuat,
                                     const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& jointPos) {
  if (static_cast<std::size_t>(jointPos.size()) != skeleton.dofCount()) {
    throw Error("forwardKinematics: joint vector has " + std::to_string(jointPos.size()) +
                " entries, skeleton has " + std::to_string(skeleton.dofCount()) + " DOF");
  }
  const std::vector<int> jointOf = skeleton.jointOfBody();
  const std::size_t n = skeleton.bodyCount();
  BodyPosesT<Scalar> out;
  out.positions.resize(n);
  out.orientations.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Body& body = skeleton.bodies[i];
    const Vec3<Scalar> offset = body.offset.cast<Scalar>();
    Vec3<Scalar> parentPos = rootPos;
    Quat<Scalar> parentQuat = rootQuat;
    if (body.parent) {
      parentPos = out.positions[*body.parent];
      parentQuat = out.orientations[*body.parent];
    }
    out.positions[i] = parentPos + parentQuat * offset;
    Quat<Scalar> local = Quat<Scalar>::Identity();
    if (jointOf[i] >= 0) {
      const Vec3<Scalar> axis = body.jointAxis->template cast<Scalar>();
      local = Quat<Scalar>(Eigen::AngleAxis<Scalar>(jointPos[jointOf[i]], axis));
    }
    out.orientations[i] = (parentQuat * local).normalized();
  }
  return out;
}

BodyPoses forwardKinematics(const PoseSequence& seq, const SkeletonSpec& skeleton,
                            std::size_t frameIndex);

BodyPoses forwardKinematics(const Frame& frame, const SkeletonSpec& skeleton);

/// Ground clearance of body i: origin z plus its heightOffset.
double bodyHeight(const SkeletonSpec& skeleton, const BodyPosesT<double>& poses, std::size_t i);

/// Lowest body height over all bodies.
double minBodyHeight(const SkeletonSpec& skeleton, const BodyPosesT<double>& poses);
double minBodyHeight(const PoseSequence& seq, const SkeletonSpec& skeleton, std::size_t frameIndex);
double minBodyHeight(const Frame& frame, const SkeletonSpec& skeleton);

enum class VelocityUnits { PerFrame, PerSecond };

/// Forward differences x(t+1) - x(t); the last frame repeats the previous
/// value. Angular velocity is the rotation vector of q(t+1) * conj(q(t)), in
/// the world frame.
struct Velocities {
  std::vector<Eigen::VectorXd> joint;
  std::vector<Eigen::Vector3d> rootLinear;
  std::vector<Eigen::Vector3d> rootAngular;
};

Velocities finiteDifferenceVelocities(const PoseSequence& seq,
                                      VelocityUnits units = VelocityUnits::PerFrame);

/// Same sequence with the time axis reversed.
PoseSequence reversed(const PoseSequence& seq);

}  // namespace motion_forge
