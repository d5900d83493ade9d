#include "motion_forge/extrema.hpp"

#include "motion_forge/motion.hpp"

#include <cmath>
#include <string>

namespace motion_forge {

namespace {

struct Plateau {
  std::size_t first;
  std::size_t last;
  double value;
};

std::vector<Plateau> plateaus(std::span<const double> series, double tolerance) {
  std::vector<Plateau> runs;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= series.size(); ++i) {
    if (i == series.size() || std::abs(series[i] - series[start]) > tolerance) {
      runs.push_back({start, i - 1, series[start]});
      start = i;
    }
  }
  return runs;
}

}  // namespace

PlateauExtrema findPlateauExtrema(std::span<const double> series, double tolerance) {
  if (series.size() < 3) {
    throw Error("extrema detection needs at least 3 frames, got " + std::to_string(series.size()));
  }
  if (!(tolerance >= 0.0)) {
    throw Error("plateau tolerance must be non-negative");
  }
  const std::vector<Plateau> runs = plateaus(series, tolerance);
  PlateauExtrema out;
  for (std::size_t r = 1; r + 1 < runs.size(); ++r) {
    const double prev = runs[r - 1].value;
    const double next = runs[r + 1].value;
    const double v = runs[r].value;
    const std::size_t mid = (runs[r].first + runs[r].last) / 2;
    if (v > prev && v > next) {
      out.maxima.push_back(mid);
    } else if (v < prev && v < next) {
      out.minima.push_back(mid);
    }
  }
  return out;
}

}  // namespace motion_forge
