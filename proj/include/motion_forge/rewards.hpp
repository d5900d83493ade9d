#pragma once

#include "motion_forge/motion.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace motion_forge {

/// World-frame body states of one frame. Velocities are per second.
struct BodyKinematics {
  std::vector<Eigen::Vector3d> positions;
  std::vector<Eigen::Quaterniond> orientations;
  std::vector<Eigen::Vector3d> linearVelocity;
  std::vector<Eigen::Vector3d> angularVelocity;
};

/// Per-frame body kinematics of a sequence; velocities are forward
/// differences scaled by fps (last frame repeats the previous one, a single
/// frame gets zero velocity).
std::vector<BodyKinematics> bodyKinematics(const PoseSequence& seq, const SkeletonSpec& skeleton);

/// Body kinematics of an isolated frame with zero velocities.
BodyKinematics bodyKinematics(const Frame& frame, const SkeletonSpec& skeleton);

struct TrackedState {
  Frame frame;
  BodyKinematics bodies;
};

struct TrackingPair {
  TrackedState robot;
  TrackedState reference;
  Eigen::VectorXd action;          // joint space, may be empty
  Eigen::VectorXd previousAction;  // joint space, may be empty
  std::optional<Eigen::Vector2d> previousComXy;
};

namespace term {
inline constexpr std::string_view kBodyPos = "body_pos";
inline constexpr std::string_view kBodyOri = "body_ori";
inline constexpr std::string_view kBodyAngVel = "body_ang_vel";
inline constexpr std::string_view kCom = "com";
inline constexpr std::string_view kCloseFeet = "close_feet";
inline constexpr std::string_view kFeetSlip = "feet_slip";
inline constexpr std::string_view kRootOri = "root_ori";
inline constexpr std::string_view kActionRateKnee = "action_rate_knee";
inline constexpr std::string_view kActionRateAnkle = "action_rate_ankle";
inline constexpr std::string_view kDofLimits = "dof_limits";
inline constexpr std::string_view kUndesiredContacts = "undesired_contacts";
inline constexpr std::string_view kShoulderHeight = "shoulder_height";
inline constexpr std::string_view kXyRootMovement = "xy_root_movement";
inline constexpr std::string_view kActionRateBeforeStand = "action_rate_before_stand";
}  // namespace term

/// Motion tracking terms, in report order.
inline constexpr std::string_view kTrackingTerms[] = {
    term::kBodyPos,        term::kBodyOri,         term::kBodyAngVel,
    term::kCom,            term::kCloseFeet,       term::kFeetSlip,
    term::kRootOri,        term::kActionRateKnee,  term::kActionRateAnkle,
    term::kDofLimits,      term::kUndesiredContacts};

/// Fall recovery terms, in report order.
inline constexpr std::string_view kRecoveryTerms[] = {
    term::kShoulderHeight, term::kXyRootMovement, term::kActionRateBeforeStand};

struct RewardWeights {
  double bodyPos = 4.0;
  double bodyOri = 2.0;
  double bodyAngVel = 1.0;
  double com = 2.0;
  double closeFeet = -1000.0;
  double feetSlip = -2.0;
  double rootOri = -1.0;
  double actionRateKnee = -3.0;
  double actionRateAnkle = -20.0;
  double dofLimits = -100.0;
  double undesiredContacts = -0.5;
  double shoulderHeight = -2.0;
  double xyRootMovement = -1.0;
  double actionRateBeforeStand = -2.0;

  /// Weight of a term by name; throws Error for unknown names.
  double& operator[](std::string_view name);
  double operator[](std::string_view name) const;
};

struct RewardConfig {
  RewardWeights weights;
  // Kernel scales, given as squared sigmas.
  double sigma2BodyPos = 0.09;
  double sigma2BodyOri = 0.25;
  double sigma2AngVel = 0.25;
  double sigma2Com = 0.04;
  double closeFeetThreshold = 0.16;        // m
  double feetSlipContactThreshold = 8.0;   // N
  double undesiredContactThreshold = 1.0;  // N
  double singleSupportHeight = 0.02;       // m, reference foot height counted as support
  double recoveryThreshold = 1.0;          // m, shoulder height gap for the recovery indicator
  double recoveryGateThreshold = 1.0;      // m, shoulder height gap gating recovery penalties

  void validate() const;
};

struct RewardTerm {
  std::string name;
  double raw = 0.0;
  double weight = 0.0;
  double weighted = 0.0;
  // Unavailable terms lack their inputs (e.g. contact forces) and are
  // excluded from the total.
  bool available = true;
};

struct RewardReport {
  std::vector<RewardTerm> terms;
  double total = 0.0;
  bool recoveryActive = false;

  const RewardTerm& term(std::string_view name) const;
};

/// Mass-weighted mean of body origins.
Eigen::Vector3d centerOfMass(const SkeletonSpec& skeleton, const std::vector<Eigen::Vector3d>& positions);

/// Mean world z of the "shoulders" body set; throws Error when the set is empty.
double meanShoulderHeight(const SkeletonSpec& skeleton, const std::vector<Eigen::Vector3d>& positions);

/// Motion tracking reward terms. Body positions and orientations are compared
/// in each state's own root frame; angular velocities in the world frame.
RewardReport evalTrackingRewards(const TrackingPair& pair, const SkeletonSpec& skeleton,
                                 const RewardConfig& cfg);

/// True when the mean shoulder heights of reference and robot differ by
/// strictly more than cfg.recoveryThreshold.
bool recoveryIndicator(const TrackingPair& pair, const SkeletonSpec& skeleton, const RewardConfig& cfg);

/// Fall recovery penalty terms. Requires previousComXy and both action vectors.
RewardReport evalRecoveryRewards(const TrackingPair& pair, const SkeletonSpec& skeleton,
                                 const RewardConfig& cfg);

}  // namespace motion_forge
