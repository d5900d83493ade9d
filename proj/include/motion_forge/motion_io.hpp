#pragma once

#include "motion_forge/motion.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace motion_forge {

/// Current version of the motion file format.
///
/// A motion file is a JSON object:
///   {
///     "format":   "motion-forge",
///     "version":  1,
///     "fps":      50.0,
///     "skeleton": { "name", "bodies": [{"name", "parent", "offset", "joint_axis",
///                   "mass", "height_offset"}], "dof_map", "body_sets", "joint_limits" },
///     "frames":   [{"root_pos": [x,y,z], "root_quat": [w,x,y,z], "joint_pos": [...],
///                   "joint_vel"?, "body_pos"?, "contact_force"?, "body_force"?, "tag"?}]
///   }
/// Quaternions are always (w, x, y, z). Numbers are 64-bit floats written in
/// shortest round-trip decimal form.
inline constexpr int kMotionFormatVersion = 1;

struct MotionDocument {
  SkeletonSpec skeleton;
  PoseSequence sequence;
  // Optional per-frame labels ("tag"), empty when none were present.
  std::vector<std::string> frameTags;
};

nlohmann::json skeletonToJson(const SkeletonSpec& skeleton);
SkeletonSpec skeletonFromJson(const nlohmann::json& j);

nlohmann::json frameToJson(const Frame& frame);
Frame frameFromJson(const nlohmann::json& j);

nlohmann::json motionToJson(const MotionDocument& doc);

/// Parses and validates a motion document. Throws Error on schema violations.
MotionDocument motionFromJson(const nlohmann::json& j);

nlohmann::json readJsonFile(const std::filesystem::path& path);
void writeJsonFile(const std::filesystem::path& path, const nlohmann::json& j);

MotionDocument readMotionFile(const std::filesystem::path& path);
void writeMotionFile(const std::filesystem::path& path, const MotionDocument& doc);

/// One row per frame: frame, root_pos xyz, root_quat wxyz, joint_pos...
void writeMotionCsv(std::ostream& out, const PoseSequence& seq);

/// Decimal form of a double that round-trips exactly.
std::string formatNumber(double value);

}  // namespace motion_forge
