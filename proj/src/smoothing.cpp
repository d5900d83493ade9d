#include "motion_forge/smoothing.hpp"

#include "motion_forge/savitzky_golay.hpp"

#include <cmath>
#include <string>

namespace motion_forge {

void SGConfig::validate() const {
  if (order < 1) {
    throw Error("smoothing.order must be a positive integer");
  }
  if (window) {
    if (*window < 3 || *window % 2 == 0) {
      throw Error("smoothing.window must be odd and at least 3, got " + std::to_string(*window));
    }
    if (*window <= order) {
      throw Error("smoothing.window must exceed smoothing.order");
    }
  }
  if (!(adaptiveFraction > 0.0 && adaptiveFraction <= 1.0)) {
    throw Error("smoothing.adaptive_fraction must lie in (0, 1]");
  }
}

int SGConfig::resolveWindow(std::size_t n) const {
  validate();
  const int length = static_cast<int>(n);
  int w = 0;
  if (window) {
    w = *window;
  } else {
    w = static_cast<int>(std::floor(static_cast<double>(n) * adaptiveFraction));
    if (w % 2 == 0) {
      ++w;
    }
    w = std::max(w, 5);
    if (w <= order) {
      w = order + 1 + (order % 2 == 1 ? 1 : 0);
    }
    if (w > length) {
      w = length % 2 == 1 ? length : length - 1;
    }
  }
  if (w > length) {
    throw Error("series of " + std::to_string(n) + " frames is shorter than the window " +
                std::to_string(w));
  }
  if (w <= order) {
    throw Error("series of " + std::to_string(n) + " frames is too short for a window above order " +
                std::to_string(order));
  }
  return w;
}

std::vector<double> sgFilter(std::span<const double> series, const SGConfig& cfg) {
  const int w = cfg.resolveWindow(series.size());
  const Eigen::Map<const Eigen::VectorXd> in(series.data(), static_cast<Eigen::Index>(series.size()));
  const Eigen::VectorXd out = savgolFilter(in, w, cfg.order);
  return {out.data(), out.data() + out.size()};
}

PoseSequence smoothSequence(const PoseSequence& seq, const SGConfig& cfg,
                            const ChannelSelector& channels) {
  const std::size_t n = seq.frames.size();
  const int w = cfg.resolveWindow(n);
  PoseSequence out = seq;
  Eigen::VectorXd channel(static_cast<Eigen::Index>(n));

  for (int axis = 0; axis < 3; ++axis) {
    if (!channels.rootAxes[static_cast<std::size_t>(axis)]) {
      continue;
    }
    for (std::size_t t = 0; t < n; ++t) {
      channel[static_cast<Eigen::Index>(t)] = seq.frames[t].rootPos[axis];
    }
    const Eigen::VectorXd filtered = savgolFilter(channel, w, cfg.order);
    for (std::size_t t = 0; t < n; ++t) {
      out.frames[t].rootPos[axis] = filtered[static_cast<Eigen::Index>(t)];
    }
  }

  if (channels.joints && n > 0) {
    const Eigen::Index dof = seq.frames.front().jointPos.size();
    for (Eigen::Index j = 0; j < dof; ++j) {
      for (std::size_t t = 0; t < n; ++t) {
        channel[static_cast<Eigen::Index>(t)] = seq.frames[t].jointPos[j];
      }
      const Eigen::VectorXd filtered = savgolFilter(channel, w, cfg.order);
      for (std::size_t t = 0; t < n; ++t) {
        out.frames[t].jointPos[j] = filtered[static_cast<Eigen::Index>(t)];
      }
    }
  }

  // Frames that moved lose their cached FK output and stored velocities.
  for (std::size_t t = 0; t < n; ++t) {
    Frame& f = out.frames[t];
    if (f.rootPos != seq.frames[t].rootPos || f.jointPos != seq.frames[t].jointPos) {
      f.bodyPos.reset();
      f.jointVel.reset();
    }
  }
  return out;
}

}  // namespace motion_forge
