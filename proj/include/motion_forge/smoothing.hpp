#pragma once

#include "motion_forge/motion.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace motion_forge {

struct SGConfig {
  int order = 3;
  // Fixed odd window length; empty selects the adaptive rule.
  std::optional<int> window;
  double adaptiveFraction = 0.1;

  /// Window for a series of n samples. The adaptive rule takes
  /// floor(n * adaptiveFraction), bumps it to odd, raises it to at least 5 and
  /// above the order, and caps it at the largest odd value <= n.
  int resolveWindow(std::size_t n) const;
  void validate() const;
};

std::vector<double> sgFilter(std::span<const double> series, const SGConfig& cfg);

struct ChannelSelector {
  std::array<bool, 3> rootAxes{true, true, true};
  bool joints = true;
};

/// Filters root position components and joint angles channel by channel.
/// Root orientation is passed through unchanged.
PoseSequence smoothSequence(const PoseSequence& seq, const SGConfig& cfg,
                            const ChannelSelector& channels = {});

}  // namespace motion_forge
