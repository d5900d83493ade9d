#include "motion_forge/rewards.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace motion_forge {

namespace {

BodyKinematics posesOnly(const BodyPosesT<double>& poses) {
  BodyKinematics k;
  k.positions = poses.positions;
  k.orientations = poses.orientations;
  k.linearVelocity.assign(poses.positions.size(), Eigen::Vector3d::Zero());
  k.angularVelocity.assign(poses.positions.size(), Eigen::Vector3d::Zero());
  return k;
}

void checkState(const TrackedState& s, const SkeletonSpec& skeleton, const char* who) {
  const std::size_t n = skeleton.bodyCount();
  if (s.bodies.positions.size() != n || s.bodies.orientations.size() != n ||
      s.bodies.linearVelocity.size() != n || s.bodies.angularVelocity.size() != n) {
    throw Error(std::string(who) + " body kinematics do not match the skeleton body count");
  }
  if (static_cast<std::size_t>(s.frame.jointPos.size()) != skeleton.dofCount()) {
    throw Error(std::string(who) + " joint vector does not match the skeleton DOF count");
  }
}

Eigen::Vector3d rootRelativePosition(const BodyKinematics& k, std::size_t b) {
  return k.orientations[0].conjugate() * (k.positions[b] - k.positions[0]);
}

Eigen::Quaterniond rootRelativeOrientation(const BodyKinematics& k, std::size_t b) {
  return (k.orientations[0].conjugate() * k.orientations[b]).normalized();
}

double footHeight(const SkeletonSpec& skeleton, const BodyKinematics& k, std::size_t b) {
  return k.positions[b].z() + skeleton.bodies[b].heightOffset;
}

bool hasActions(const TrackingPair& pair, const SkeletonSpec& skeleton) {
  if (pair.action.size() == 0 || pair.previousAction.size() == 0) {
    return false;
  }
  const auto dof = static_cast<Eigen::Index>(skeleton.dofCount());
  if (pair.action.size() != dof || pair.previousAction.size() != dof) {
    throw Error("action vectors must match the skeleton DOF count");
  }
  return true;
}

double actionRate(const TrackingPair& pair, const std::vector<std::size_t>& joints) {
  double sum = 0.0;
  for (const std::size_t j : joints) {
    const double d = pair.action[static_cast<Eigen::Index>(j)] -
                     pair.previousAction[static_cast<Eigen::Index>(j)];
    sum += d * d;
  }
  return sum;
}

// Vertical contact force on each foot, when the robot frame carries it.
std::optional<Eigen::VectorXd> footForces(const Frame& frame, std::span<const std::size_t> feet) {
  if (frame.contactForce && static_cast<std::size_t>(frame.contactForce->size()) == feet.size()) {
    return frame.contactForce;
  }
  if (frame.bodyForce) {
    Eigen::VectorXd f(static_cast<Eigen::Index>(feet.size()));
    for (std::size_t i = 0; i < feet.size(); ++i) {
      f[static_cast<Eigen::Index>(i)] = (*frame.bodyForce)[static_cast<Eigen::Index>(feet[i])];
    }
    return f;
  }
  return std::nullopt;
}

void addTerm(RewardReport& report, std::string_view name, std::optional<double> raw, double weight) {
  RewardTerm t;
  t.name = std::string(name);
  t.weight = weight;
  if (raw) {
    t.raw = *raw;
    t.weighted = weight * *raw;
    report.total += t.weighted;
  } else {
    t.available = false;
    spdlog::debug("reward term '{}' unavailable: missing inputs; excluded from total", name);
  }
  report.terms.push_back(std::move(t));
}

}  // namespace

double& RewardWeights::operator[](std::string_view name) {
  if (name == term::kBodyPos) return bodyPos;
  if (name == term::kBodyOri) return bodyOri;
  if (name == term::kBodyAngVel) return bodyAngVel;
  if (name == term::kCom) return com;
  if (name == term::kCloseFeet) return closeFeet;
  if (name == term::kFeetSlip) return feetSlip;
  if (name == term::kRootOri) return rootOri;
  if (name == term::kActionRateKnee) return actionRateKnee;
  if (name == term::kActionRateAnkle) return actionRateAnkle;
  if (name == term::kDofLimits) return dofLimits;
  if (name == term::kUndesiredContacts) return undesiredContacts;
  if (name == term::kShoulderHeight) return shoulderHeight;
  if (name == term::kXyRootMovement) return xyRootMovement;
  if (name == term::kActionRateBeforeStand) return actionRateBeforeStand;
  throw Error("unknown reward term '" + std::string(name) + "'");
}

double RewardWeights::operator[](std::string_view name) const {
  return const_cast<RewardWeights&>(*this)[name];
}

void RewardConfig::validate() const {
  for (const double s : {sigma2BodyPos, sigma2BodyOri, sigma2AngVel, sigma2Com}) {
    if (!(s > 0.0)) {
      throw Error("reward kernel scales must be positive");
    }
  }
  for (const double th : {closeFeetThreshold, feetSlipContactThreshold, undesiredContactThreshold,
                          singleSupportHeight, recoveryThreshold, recoveryGateThreshold}) {
    if (!(th >= 0.0)) {
      throw Error("reward thresholds must be non-negative");
    }
  }
}

const RewardTerm& RewardReport::term(std::string_view name) const {
  for (const RewardTerm& t : terms) {
    if (t.name == name) {
      return t;
    }
  }
  throw Error("reward report has no term '" + std::string(name) + "'");
}

std::vector<BodyKinematics> bodyKinematics(const PoseSequence& seq, const SkeletonSpec& skeleton) {
  const std::size_t n = seq.frames.size();
  std::vector<BodyKinematics> out;
  out.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.push_back(posesOnly(forwardKinematics(seq, skeleton, t)));
  }
  if (n < 2) {
    return out;
  }
  for (std::size_t t = 0; t + 1 < n; ++t) {
    for (std::size_t b = 0; b < skeleton.bodyCount(); ++b) {
      out[t].linearVelocity[b] = (out[t + 1].positions[b] - out[t].positions[b]) * seq.fps;
      out[t].angularVelocity[b] =
          rotationVector<double>(out[t + 1].orientations[b] * out[t].orientations[b].conjugate()) *
          seq.fps;
    }
  }
  out[n - 1].linearVelocity = out[n - 2].linearVelocity;
  out[n - 1].angularVelocity = out[n - 2].angularVelocity;
  return out;
}

BodyKinematics bodyKinematics(const Frame& frame, const SkeletonSpec& skeleton) {
  return posesOnly(forwardKinematics(frame, skeleton));
}

Eigen::Vector3d centerOfMass(const SkeletonSpec& skeleton, const std::vector<Eigen::Vector3d>& positions) {
  Eigen::Vector3d weighted = Eigen::Vector3d::Zero();
  double mass = 0.0;
  for (std::size_t b = 0; b < positions.size(); ++b) {
    weighted += skeleton.bodies[b].mass * positions[b];
    mass += skeleton.bodies[b].mass;
  }
  if (!(mass > 0.0)) {
    throw Error("center of mass undefined: total body mass is zero");
  }
  return weighted / mass;
}

double meanShoulderHeight(const SkeletonSpec& skeleton, const std::vector<Eigen::Vector3d>& positions) {
  const auto shoulders = skeleton.bodySet("shoulders");
  if (shoulders.empty()) {
    throw Error("skeleton defines no 'shoulders' body set");
  }
  double sum = 0.0;
  for (const std::size_t b : shoulders) {
    sum += positions[b].z();
  }
  return sum / static_cast<double>(shoulders.size());
}

RewardReport evalTrackingRewards(const TrackingPair& pair, const SkeletonSpec& skeleton,
                                 const RewardConfig& cfg) {
  cfg.validate();
  checkState(pair.robot, skeleton, "robot");
  checkState(pair.reference, skeleton, "reference");
  const BodyKinematics& ref = pair.reference.bodies;
  const BodyKinematics& rob = pair.robot.bodies;
  const std::size_t bodies = skeleton.bodyCount();
  const auto invB = 1.0 / static_cast<double>(bodies);
  const RewardWeights& w = cfg.weights;

  double posErr = 0.0;
  double oriErr = 0.0;
  double angErr = 0.0;
  for (std::size_t b = 0; b < bodies; ++b) {
    posErr += (rootRelativePosition(ref, b) - rootRelativePosition(rob, b)).squaredNorm();
    oriErr += quatError(rootRelativeOrientation(ref, b), rootRelativeOrientation(rob, b)).squaredNorm();
    angErr += (ref.angularVelocity[b] - rob.angularVelocity[b]).squaredNorm();
  }

  RewardReport report;
  addTerm(report, term::kBodyPos, std::exp(-posErr * invB / cfg.sigma2BodyPos), w.bodyPos);
  addTerm(report, term::kBodyOri, std::exp(-oriErr * invB / cfg.sigma2BodyOri), w.bodyOri);
  addTerm(report, term::kBodyAngVel, std::exp(-angErr * invB / cfg.sigma2AngVel), w.bodyAngVel);

  const auto feet = skeleton.bodySet("feet");
  std::optional<double> com;
  std::optional<double> closeFeet;
  std::optional<double> slip;
  if (!feet.empty()) {
    std::size_t supports = 0;
    for (const std::size_t f : feet) {
      if (footHeight(skeleton, ref, f) < cfg.singleSupportHeight) {
        ++supports;
      }
    }
    const bool unbalanced = supports == 1;
    std::size_t lowest = feet.front();
    for (const std::size_t f : feet) {
      if (footHeight(skeleton, rob, f) < footHeight(skeleton, rob, lowest)) {
        lowest = f;
      }
    }
    const Eigen::Vector2d comXy = centerOfMass(skeleton, rob.positions).head<2>();
    const double dist = (comXy - rob.positions[lowest].head<2>()).norm();
    com = unbalanced ? std::exp(-dist / cfg.sigma2Com) : 0.0;

    if (feet.size() >= 2) {
      const double gap = (rob.positions[feet[0]] - rob.positions[feet[1]]).norm();
      closeFeet = std::max(0.0, cfg.closeFeetThreshold - gap);
    }
    if (const auto forces = footForces(pair.robot.frame, feet)) {
      double sum = 0.0;
      for (std::size_t i = 0; i < feet.size(); ++i) {
        if ((*forces)[static_cast<Eigen::Index>(i)] > cfg.feetSlipContactThreshold) {
          sum += std::sqrt(rob.linearVelocity[feet[i]].head<2>().norm());
        }
      }
      slip = sum;
    }
  }
  addTerm(report, term::kCom, com, w.com);
  addTerm(report, term::kCloseFeet, closeFeet, w.closeFeet);
  addTerm(report, term::kFeetSlip, slip, w.feetSlip);

  addTerm(report, term::kRootOri,
          quatError(pair.reference.frame.rootQuat, pair.robot.frame.rootQuat).squaredNorm(), w.rootOri);

  std::optional<double> knee;
  std::optional<double> ankle;
  if (hasActions(pair, skeleton)) {
    knee = actionRate(pair, skeleton.jointsInSet("knees"));
    ankle = actionRate(pair, skeleton.jointsInSet("ankles"));
  }
  addTerm(report, term::kActionRateKnee, knee, w.actionRateKnee);
  addTerm(report, term::kActionRateAnkle, ankle, w.actionRateAnkle);

  double limits = 0.0;
  const Eigen::VectorXd& q = pair.robot.frame.jointPos;
  for (std::size_t j = 0; j < skeleton.dofCount(); ++j) {
    const double p = q[static_cast<Eigen::Index>(j)];
    limits += std::max(0.0, p - skeleton.jointLimits[j].upper);
    limits += std::max(0.0, skeleton.jointLimits[j].lower - p);
  }
  addTerm(report, term::kDofLimits, limits, w.dofLimits);

  std::optional<double> contacts;
  const auto undesired = skeleton.bodySet("undesired_contact_bodies");
  if (undesired.empty()) {
    contacts = 0.0;
  } else if (pair.robot.frame.bodyForce) {
    double count = 0.0;
    for (const std::size_t b : undesired) {
      if ((*pair.robot.frame.bodyForce)[static_cast<Eigen::Index>(b)] > cfg.undesiredContactThreshold) {
        count += 1.0;
      }
    }
    contacts = count;
  }
  addTerm(report, term::kUndesiredContacts, contacts, w.undesiredContacts);

  report.recoveryActive = skeleton.bodySet("shoulders").empty()
                              ? false
                              : recoveryIndicator(pair, skeleton, cfg);
  return report;
}

bool recoveryIndicator(const TrackingPair& pair, const SkeletonSpec& skeleton, const RewardConfig& cfg) {
  const double gap = std::abs(meanShoulderHeight(skeleton, pair.reference.bodies.positions) -
                              meanShoulderHeight(skeleton, pair.robot.bodies.positions));
  return gap > cfg.recoveryThreshold;
}

RewardReport evalRecoveryRewards(const TrackingPair& pair, const SkeletonSpec& skeleton,
                                 const RewardConfig& cfg) {
  cfg.validate();
  checkState(pair.robot, skeleton, "robot");
  checkState(pair.reference, skeleton, "reference");
  if (!pair.previousComXy) {
    throw Error("recovery rewards need the previous center-of-mass position");
  }
  if (!hasActions(pair, skeleton)) {
    throw Error("recovery rewards need the current and previous actions");
  }
  const BodyKinematics& ref = pair.reference.bodies;
  const BodyKinematics& rob = pair.robot.bodies;
  const RewardWeights& w = cfg.weights;

  double shoulder = 0.0;
  for (const std::size_t b : skeleton.bodySet("shoulders")) {
    const double d = ref.positions[b].z() - rob.positions[b].z();
    shoulder += d * d;
  }
  const double gap = std::abs(meanShoulderHeight(skeleton, ref.positions) -
                              meanShoulderHeight(skeleton, rob.positions));
  const double gate = gap > cfg.recoveryGateThreshold ? 1.0 : 0.0;
  const Eigen::Vector2d comXy = centerOfMass(skeleton, rob.positions).head<2>();

  double rate = 0.0;
  for (Eigen::Index j = 0; j < pair.action.size(); ++j) {
    const double d = pair.action[j] - pair.previousAction[j];
    rate += d * d;
  }

  RewardReport report;
  addTerm(report, term::kShoulderHeight, shoulder, w.shoulderHeight);
  addTerm(report, term::kXyRootMovement, gate * (comXy - *pair.previousComXy).norm(), w.xyRootMovement);
  addTerm(report, term::kActionRateBeforeStand, gate * rate, w.actionRateBeforeStand);
  report.recoveryActive = recoveryIndicator(pair, skeleton, cfg);
  return report;
}

}  // namespace motion_forge
