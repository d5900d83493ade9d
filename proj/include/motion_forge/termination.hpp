#pragma once

#include "motion_forge/rewards.hpp"

#include <cstddef>

namespace motion_forge {

/// Projected-gravity z difference produced by tilting an upright frame by
/// `angle` radians: 1 - cos(angle).
double orientationThresholdFromAngle(double angle);

struct TerminationConfig {
  double positionThreshold = 0.5;                            // m, root position
  double orientationThreshold = orientationThresholdFromAngle(0.8);  // projected-gravity z gap
  double bodyThreshold = 0.5;                                // m, any body position
  std::size_t maxBadSteps = 50;

  void validate() const;
};

struct BadTrackingFlags {
  bool rootPosition = false;
  bool orientation = false;
  bool bodyPosition = false;

  bool any() const { return rootPosition || orientation || bodyPosition; }
};

/// Root position, projected-gravity orientation, and per-body position
/// deviations between reference and robot, all in the world frame.
BadTrackingFlags evalBadTracking(const TrackingPair& pair, const TerminationConfig& cfg);

struct TerminationState {
  std::size_t badRun = 0;  // consecutive bad steps ending at the last step
  BadTrackingFlags lastFlags;
  bool lastBad = false;
  bool terminated = false;
};

/// Advances the consecutive-bad counter. While recovering, the episode ends
/// once badRun reaches cfg.maxBadSteps; otherwise any bad step ends it.
/// Throws Error when the state is already terminated.
TerminationState stepTermination(const TerminationState& state, bool bad, bool recovering,
                                 const TerminationConfig& cfg);

TerminationState stepTermination(const TerminationState& state, const BadTrackingFlags& flags,
                                 bool recovering, const TerminationConfig& cfg);

}  // namespace motion_forge
