#include "motion_forge/termination.hpp"

#include <cmath>

namespace motion_forge {

double orientationThresholdFromAngle(double angle) { return 1.0 - std::cos(angle); }

void TerminationConfig::validate() const {
  if (!(positionThreshold > 0.0) || !(orientationThreshold > 0.0) || !(bodyThreshold > 0.0)) {
    throw Error("termination thresholds must be positive");
  }
  if (maxBadSteps == 0) {
    throw Error("termination.max_bad_steps must be positive");
  }
}

BadTrackingFlags evalBadTracking(const TrackingPair& pair, const TerminationConfig& cfg) {
  const Frame& ref = pair.reference.frame;
  const Frame& rob = pair.robot.frame;
  BadTrackingFlags flags;
  flags.rootPosition = (ref.rootPos - rob.rootPos).norm() > cfg.positionThreshold;
  flags.orientation = std::abs(projectedGravity<double>(ref.rootQuat).z() -
                               projectedGravity<double>(rob.rootQuat).z()) > cfg.orientationThreshold;
  const auto& refBodies = pair.reference.bodies.positions;
  const auto& robBodies = pair.robot.bodies.positions;
  if (refBodies.size() != robBodies.size()) {
    throw Error("reference and robot body counts differ");
  }
  for (std::size_t b = 0; b < refBodies.size(); ++b) {
    if ((refBodies[b] - robBodies[b]).norm() > cfg.bodyThreshold) {
      flags.bodyPosition = true;
      break;
    }
  }
  return flags;
}

TerminationState stepTermination(const TerminationState& state, bool bad, bool recovering,
                                 const TerminationConfig& cfg) {
  if (state.terminated) {
    throw Error("cannot step a terminated episode");
  }
  TerminationState next = state;
  next.lastBad = bad;
  next.badRun = bad ? state.badRun + 1 : 0;
  next.terminated = recovering ? next.badRun >= cfg.maxBadSteps : bad;
  return next;
}

TerminationState stepTermination(const TerminationState& state, const BadTrackingFlags& flags,
                                 bool recovering, const TerminationConfig& cfg) {
  TerminationState next = stepTermination(state, flags.any(), recovering, cfg);
  next.lastFlags = flags;
  return next;
}

}  // namespace motion_forge
