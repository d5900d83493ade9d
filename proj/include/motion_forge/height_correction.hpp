#pragma once

#include "motion_forge/motion.hpp"

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace motion_forge {

inline constexpr double kStandardGravity = 9.81;

struct CorrectionConfig {
  // Gravitational acceleration, in m/s^2 when gravityPerSecond is set and in
  // m/frame^2 otherwise.
  double gravity = kStandardGravity;
  bool gravityPerSecond = true;
  // Minimum per-frame rise (m/frame) that is propagated outside contacts.
  double velocityThreshold = 1e-3;
  double plateauTolerance = 1e-4;
  // Maxima less prominent than this (m) are skipped as squat/stand artifacts.
  // Zero disables the rule.
  double autoSkipProminence = 0.02;
  // Frames never treated as jump take-offs.
  std::set<std::size_t> skipFrames;

  double gravityPerFrame(double fps) const;
  void validate() const;
};

struct ExtremaSet {
  std::vector<std::size_t> maxima;  // after removing skipSet
  std::vector<std::size_t> minima;
  std::set<std::size_t> skipSet;    // configured frames plus low-prominence maxima
};

/// Local extrema of a root height track, with skipped maxima removed.
ExtremaSet detectExtrema(std::span<const double> heights, const CorrectionConfig& cfg);

struct JumpSegment {
  std::size_t takeoff = 0;
  std::size_t landing = 0;
  std::size_t interiorFrames = 0;  // N
  double flightTime = 0.0;         // T in seconds
};

enum class SegmentIssue { NoLanding, ImaginaryFlightTime };

struct SegmentFlag {
  std::size_t takeoff = 0;
  std::optional<std::size_t> landing;
  SegmentIssue issue = SegmentIssue::NoLanding;
  std::string message;
};

struct CorrectionReport {
  std::vector<double> originalHeights;
  std::vector<double> correctedHeights;
  std::vector<std::size_t> contactFrames;
  std::vector<JumpSegment> jumpSegments;
  std::vector<std::size_t> penetrationFixes;
  std::vector<SegmentFlag> flags;
  ExtremaSet extrema;

  bool flagged() const { return !flags.empty(); }
};

struct CorrectionResult {
  PoseSequence sequence;
  CorrectionReport report;
};

/// Rebuilds the root height track so the lowest body rests on the ground in
/// contact phases, jumps follow a ballistic parabola, and no frame penetrates
/// the ground. Only the z component of the root position is modified.
///
/// Steps, in order:
///  1. the first frame is aligned so its lowest body touches the ground;
///  2. each local minimum of the raw track is aligned to the ground, every
///     other frame inherits the previous corrected height plus the raw rise
///     when that rise exceeds the velocity threshold;
///  3. between each kept maximum and the next minimum the corrected heights are
///     replaced by y0 - g/2 * (k T / (N + 1))^2 with T = sqrt(2 (y0 - y1) / g);
///  4. any frame still below ground is re-aligned from its raw height.
/// Segments without a landing or with y0 < y1 are left as propagated and
/// reported in CorrectionReport::flags.
CorrectionResult correctRootHeight(const PoseSequence& seq, const SkeletonSpec& skeleton,
                                   const CorrectionConfig& cfg);

std::string toString(SegmentIssue issue);

}  // namespace motion_forge
