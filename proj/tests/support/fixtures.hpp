#pragma once

#include "motion_forge/motion.hpp"
#include "motion_forge/motion_io.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

namespace mftest {

namespace mf = motion_forge;

inline constexpr double kFps = 50.0;

/// pelvis -> hip (y) -> knee (y, 0.5 m below) -> foot (0.5 m below). With
/// hip = acos(e) and knee = -2 acos(e) the foot sits e metres straight below
/// the pelvis.
mf::SkeletonSpec legSkeleton();

/// Leg frame with the given root position and leg extension.
mf::Frame legFrame(double x, double rootZ, double extension);

/// Two-legged upper/lower body with feet, shoulders, knees, ankles and
/// undesired contact sets; standing pelvis height 0.95 m, shoulders 1.55 m.
mf::SkeletonSpec humanoidSkeleton();

struct JumpScenario {
  std::size_t frames = 400;
  std::size_t jumps = 1;
  double jumpHeight = 0.3;   // apex rise of the root above standing height
  double offset = 0.0;       // constant root z error
  double drift = 0.0;        // root z error added per frame
  double noise = 0.0;        // uniform root z noise amplitude
  double fps = kFps;
  std::uint64_t seed = 1;
};

/// Stand / crouch / push / ballistic flight / landing crouch / stand cycles on
/// the leg skeleton, with the requested root height errors added on top.
mf::PoseSequence jumpSequence(const JumpScenario& scenario);

/// Clean jump whose corrected apex lies exactly 0.5 m above the landing
/// crouch: crouch at extension 0.6, linear ascent to 1.1, linear descent,
/// landing crouch at 0.6. Returns the sequence and its apex frame.
struct ExactJump {
  mf::PoseSequence sequence;
  std::size_t apex = 0;
  std::size_t landing = 0;
};
ExactJump exactJump(double offset);

/// Jump whose landing stance is taller than the take-off, which makes the
/// flight time imaginary.
mf::PoseSequence imaginaryFlightSequence();

/// Random joint-space sequence for the given skeleton.
mf::PoseSequence randomSequence(const mf::SkeletonSpec& skeleton, std::size_t frames, std::mt19937_64& rng,
                                double fps = kFps);

mf::MotionDocument document(const mf::SkeletonSpec& skeleton, const mf::PoseSequence& seq);

/// Fresh, empty directory under the system temp dir.
std::filesystem::path scratchDir(const std::string& name);

/// Sorted relative paths and contents of every file below `root`.
std::vector<std::pair<std::string, std::string>> snapshotTree(const std::filesystem::path& root);

std::string readFile(const std::filesystem::path& path);

}  // namespace mftest
