#include "motion_forge/height_correction.hpp"

#include "motion_forge/extrema.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace motion_forge {

namespace {

// Clearance below this counts as touching rather than penetrating; absorbs the
// rounding of p - (p - zmin).
constexpr double kGroundEps = 1e-12;

double lowestBetween(std::span<const double> h, std::size_t first, std::size_t last) {
  return *std::min_element(h.begin() + static_cast<std::ptrdiff_t>(first),
                           h.begin() + static_cast<std::ptrdiff_t>(last) + 1);
}

}  // namespace

double CorrectionConfig::gravityPerFrame(double fps) const {
  return gravityPerSecond ? gravity / (fps * fps) : gravity;
}

void CorrectionConfig::validate() const {
  if (!(gravity > 0.0)) {
    throw Error("correction.gravity must be positive");
  }
  if (!(velocityThreshold >= 0.0)) {
    throw Error("correction.velocity_threshold must be non-negative");
  }
  if (!(plateauTolerance >= 0.0)) {
    throw Error("correction.plateau_tolerance must be non-negative");
  }
  if (!(autoSkipProminence >= 0.0)) {
    throw Error("correction.auto_skip_prominence must be non-negative");
  }
}

std::string toString(SegmentIssue issue) {
  switch (issue) {
    case SegmentIssue::NoLanding:
      return "no_landing";
    case SegmentIssue::ImaginaryFlightTime:
      return "imaginary_flight_time";
  }
  return "unknown";
}

ExtremaSet detectExtrema(std::span<const double> heights, const CorrectionConfig& cfg) {
  cfg.validate();
  const PlateauExtrema raw = findPlateauExtrema(heights, cfg.plateauTolerance);
  ExtremaSet out;
  out.minima = raw.minima;
  out.skipSet = cfg.skipFrames;

  // Prominence: height above the higher of the two lowest points separating
  // this maximum from its neighbouring maxima (or the series ends).
  const std::size_t last = heights.size() - 1;
  for (std::size_t k = 0; k < raw.maxima.size(); ++k) {
    const std::size_t m = raw.maxima[k];
    const std::size_t leftBound = k == 0 ? 0 : raw.maxima[k - 1];
    const std::size_t rightBound = k + 1 == raw.maxima.size() ? last : raw.maxima[k + 1];
    const double base =
        std::max(lowestBetween(heights, leftBound, m), lowestBetween(heights, m, rightBound));
    if (heights[m] - base < cfg.autoSkipProminence) {
      out.skipSet.insert(m);
    }
  }
  for (const std::size_t m : raw.maxima) {
    if (!out.skipSet.contains(m)) {
      out.maxima.push_back(m);
    }
  }
  return out;
}

CorrectionResult correctRootHeight(const PoseSequence& seq, const SkeletonSpec& skeleton,
                                   const CorrectionConfig& cfg) {
  cfg.validate();
  validateSequence(seq, skeleton);
  const std::size_t n = seq.frames.size();
  if (n < 3) {
    throw Error("height correction needs at least 3 frames, got " + std::to_string(n));
  }

  CorrectionReport report;
  const std::vector<double> raw = seq.rootHeights();
  report.originalHeights = raw;

  std::vector<double> zmin(n);
  for (std::size_t t = 0; t < n; ++t) {
    zmin[t] = minBodyHeight(seq, skeleton, t);
  }
  // Lowest body height after moving the root of frame t to height h.
  const auto clearance = [&](std::size_t t, double h) { return zmin[t] + (h - raw[t]); };

  std::vector<double> rise(n, 0.0);
  for (std::size_t t = 0; t + 1 < n; ++t) {
    rise[t] = raw[t + 1] - raw[t];
  }

  report.extrema = detectExtrema(raw, cfg);
  const ExtremaSet& ext = report.extrema;
  const std::set<std::size_t> minima(ext.minima.begin(), ext.minima.end());

  std::vector<double> h(n);
  h[0] = raw[0] - zmin[0];
  for (std::size_t t = 1; t < n; ++t) {
    if (minima.contains(t)) {
      const double aligned = raw[t] - zmin[t];
      if (clearance(t, aligned) >= -kGroundEps) {
        h[t] = aligned;
        report.contactFrames.push_back(t);
        continue;
      }
    }
    h[t] = h[t - 1] + (rise[t - 1] > cfg.velocityThreshold ? rise[t - 1] : 0.0);
  }

  const double g = cfg.gravityPerFrame(seq.fps);
  for (const std::size_t takeoff : ext.maxima) {
    const auto landingIt = std::upper_bound(ext.minima.begin(), ext.minima.end(), takeoff);
    if (landingIt == ext.minima.end()) {
      report.flags.push_back({takeoff, std::nullopt, SegmentIssue::NoLanding,
                              "maximum at frame " + std::to_string(takeoff) +
                                  " has no following minimum"});
      continue;
    }
    const std::size_t landing = *landingIt;
    const double drop = h[takeoff] - h[landing];
    if (drop < 0.0) {
      report.flags.push_back({takeoff, landing, SegmentIssue::ImaginaryFlightTime,
                              "take-off at frame " + std::to_string(takeoff) +
                                  " lies below its landing at frame " + std::to_string(landing)});
      continue;
    }
    const std::size_t interior = landing - takeoff - 1;
    const double flight = std::sqrt(2.0 * drop / g);  // frames
    for (std::size_t k = 1; k <= interior; ++k) {
      const double dt = static_cast<double>(k) / static_cast<double>(interior + 1) * flight;
      h[takeoff + k] = h[takeoff] - 0.5 * g * dt * dt;
    }
    report.jumpSegments.push_back({takeoff, landing, interior, flight / seq.fps});
  }

  for (std::size_t t = 0; t < n; ++t) {
    if (clearance(t, h[t]) < -kGroundEps) {
      h[t] = raw[t] - zmin[t];
      report.penetrationFixes.push_back(t);
    }
  }

  for (const SegmentFlag& flag : report.flags) {
    spdlog::warn("height correction: {}", flag.message);
  }

  CorrectionResult result{seq, std::move(report)};
  for (std::size_t t = 0; t < n; ++t) {
    Frame& f = result.sequence.frames[t];
    if (f.bodyPos) {
      for (Eigen::Vector3d& p : *f.bodyPos) {
        p.z() += h[t] - raw[t];
      }
    }
    f.rootPos.z() = h[t];
  }
  result.report.correctedHeights = std::move(h);
  return result;
}

}  // namespace motion_forge
