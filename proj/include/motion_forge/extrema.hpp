#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace motion_forge {

struct PlateauExtrema {
  std::vector<std::size_t> maxima;
  std::vector<std::size_t> minima;
};

/// Discrete local extrema of a sampled signal.
///
/// The series is first split into plateaus: maximal runs whose samples stay
/// within `tolerance` of the run's first sample. A plateau is a maximum when
/// its value is strictly above both neighbouring plateaus and a minimum when
/// strictly below both; it is reported at its midpoint frame (rounded down).
/// Plateaus touching either end of the series are never extrema.
///
/// Requires at least 3 samples.
PlateauExtrema findPlateauExtrema(std::span<const double> series, double tolerance);

}  // namespace motion_forge
