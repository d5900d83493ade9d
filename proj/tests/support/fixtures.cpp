#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mftest {

namespace {

constexpr double kStand = 0.95;
constexpr double kCrouch = 0.6;

mf::Body body(std::string name, std::size_t parent, Eigen::Vector3d offset,
              std::optional<Eigen::Vector3d> axis, double mass = 1.0) {
  mf::Body b;
  b.name = std::move(name);
  b.parent = parent;
  b.offset = offset;
  b.jointAxis = axis;
  b.mass = mass;
  return b;
}

// Smooth 0 -> 1 ramp over `steps` samples, s in [1, steps].
double ease(std::size_t s, std::size_t steps) {
  const double u = static_cast<double>(s) / static_cast<double>(steps);
  return 0.5 - 0.5 * std::cos(std::numbers::pi * u);
}

struct Track {
  std::vector<double> root;
  std::vector<double> extension;

  void push(double r, double e) {
    root.push_back(r);
    extension.push_back(e);
  }
  // Feet on the ground while the leg moves from `from` to `to`.
  void grounded(double from, double to, std::size_t steps) {
    for (std::size_t s = 1; s <= steps; ++s) {
      const double e = from + (to - from) * ease(s, steps);
      push(e, e);
    }
  }
  void hold(double e, std::size_t steps) {
    for (std::size_t s = 0; s < steps; ++s) {
      push(e, e);
    }
  }
};

}  // namespace

mf::SkeletonSpec legSkeleton() {
  mf::SkeletonSpec s;
  s.name = "leg";
  mf::Body pelvis;
  pelvis.name = "pelvis";
  s.bodies.push_back(pelvis);
  s.bodies.push_back(body("hip", 0, Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitY()));
  s.bodies.push_back(body("knee", 1, Eigen::Vector3d(0, 0, -0.5), Eigen::Vector3d::UnitY()));
  s.bodies.push_back(body("foot", 2, Eigen::Vector3d(0, 0, -0.5), std::nullopt));
  s.bodySets["feet"] = {3};
  mf::assignDefaultDofMap(s);
  s.validate();
  return s;
}

mf::Frame legFrame(double x, double rootZ, double extension) {
  mf::Frame f;
  f.rootPos = Eigen::Vector3d(x, 0.0, rootZ);
  const double a = std::acos(std::clamp(extension, -1.0, 1.0));
  f.jointPos = Eigen::Vector2d(a, -2.0 * a);
  return f;
}

mf::SkeletonSpec humanoidSkeleton() {
  mf::SkeletonSpec s;
  s.name = "humanoid";
  mf::Body pelvis;
  pelvis.name = "pelvis";
  pelvis.mass = 8.0;
  const Eigen::Vector3d x = Eigen::Vector3d::UnitX();
  const Eigen::Vector3d y = Eigen::Vector3d::UnitY();
  s.bodies.push_back(pelvis);                                                           // 0
  s.bodies.push_back(body("torso", 0, {0, 0, 0.1}, y, 12.0));                           // 1
  s.bodies.push_back(body("l_shoulder", 1, {0, 0.2, 0.5}, x, 2.0));                     // 2
  s.bodies.push_back(body("r_shoulder", 1, {0, -0.2, 0.5}, x, 2.0));                    // 3
  s.bodies.push_back(body("l_hip", 0, {0, 0.1, 0}, y, 3.0));                            // 4
  s.bodies.push_back(body("l_knee", 4, {0, 0, -0.45}, y, 2.5));                         // 5
  s.bodies.push_back(body("l_ankle", 5, {0, 0, -0.45}, y, 1.0));                        // 6
  s.bodies.push_back(body("l_foot", 6, {0.05, 0, -0.05}, std::nullopt, 0.5));           // 7
  s.bodies.push_back(body("r_hip", 0, {0, -0.1, 0}, y, 3.0));                           // 8
  s.bodies.push_back(body("r_knee", 8, {0, 0, -0.45}, y, 2.5));                         // 9
  s.bodies.push_back(body("r_ankle", 9, {0, 0, -0.45}, y, 1.0));                        // 10
  s.bodies.push_back(body("r_foot", 10, {0.05, 0, -0.05}, std::nullopt, 0.5));          // 11
  s.bodySets["feet"] = {7, 11};
  s.bodySets["shoulders"] = {2, 3};
  s.bodySets["knees"] = {5, 9};
  s.bodySets["ankles"] = {6, 10};
  s.bodySets["undesired_contact_bodies"] = {1, 2, 3, 5, 9};
  mf::assignDefaultDofMap(s);
  for (mf::JointLimit& lim : s.jointLimits) {
    lim = {-1.5, 1.5};
  }
  s.validate();
  return s;
}

mf::PoseSequence jumpSequence(const JumpScenario& sc) {
  const double g = 9.81 / (sc.fps * sc.fps);
  const double v0 = std::sqrt(2.0 * g * sc.jumpHeight);
  const auto flight = static_cast<std::size_t>(std::ceil(2.0 * v0 / g));

  const auto jumpCycle = [&](Track& t) {
    t.grounded(kStand, kCrouch, 8);
    t.grounded(kCrouch, kStand, 6);
    for (std::size_t k = 1; k < flight; ++k) {
      const double kk = static_cast<double>(k);
      t.push(std::max(kStand, kStand + v0 * kk - 0.5 * g * kk * kk), kStand);
    }
    t.grounded(kStand, kCrouch, 6);
    t.grounded(kCrouch, kStand, 8);
  };
  Track probe;
  jumpCycle(probe);
  const std::size_t cycle = probe.root.size();
  if (sc.frames < sc.jumps * cycle + sc.jumps + 1) {
    throw mf::Error("jump scenario too short for its jumps");
  }
  const std::size_t standTotal = sc.frames - sc.jumps * cycle;

  Track track;
  for (std::size_t j = 0; j <= sc.jumps; ++j) {
    const std::size_t stand = standTotal / (sc.jumps + 1) + (j < standTotal % (sc.jumps + 1) ? 1 : 0);
    track.hold(kStand, stand);
    if (j < sc.jumps) {
      jumpCycle(track);
    }
  }

  std::mt19937_64 rng(sc.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  mf::PoseSequence seq;
  seq.fps = sc.fps;
  seq.skeletonId = "leg";
  for (std::size_t t = 0; t < track.root.size(); ++t) {
    const double err = sc.offset + sc.drift * static_cast<double>(t) + sc.noise * unit(rng);
    seq.frames.push_back(legFrame(0.01 * static_cast<double>(t), track.root[t] + err, track.extension[t]));
  }
  return seq;
}

ExactJump exactJump(double offset) {
  Track t;
  t.hold(kStand, 10);
  t.grounded(kStand, kCrouch, 10);
  for (int k = 1; k <= 25; ++k) {
    const double r = kCrouch + 0.02 * k;
    t.push(r, std::min(r, kStand));
  }
  ExactJump out;
  out.apex = t.root.size() - 1;
  for (int k = 1; k <= 6; ++k) {
    t.push(1.1 - 0.025 * k, kStand);
  }
  t.grounded(kStand, kCrouch, 10);
  out.landing = t.root.size() - 1;
  t.grounded(kCrouch, kStand, 10);
  t.hold(kStand, 10);
  out.sequence.fps = kFps;
  out.sequence.skeletonId = "leg";
  for (std::size_t i = 0; i < t.root.size(); ++i) {
    out.sequence.frames.push_back(legFrame(0.0, t.root[i] + offset, t.extension[i]));
  }
  return out;
}

mf::PoseSequence imaginaryFlightSequence() {
  Track t;
  t.hold(0.7, 10);
  t.grounded(0.7, 0.4, 10);
  t.grounded(0.4, 0.5, 10);
  for (std::size_t s = 1; s <= 10; ++s) {
    // root sinks while the leg straightens through the floor
    const double u = ease(s, 10);
    t.push(0.5 - 0.05 * u, 0.5 + 0.5 * u);
  }
  for (std::size_t s = 1; s <= 10; ++s) {
    t.push(0.45 + 0.1 * ease(s, 10), 1.0);
  }
  t.hold(0.55, 1);
  for (std::size_t s = 0; s < 9; ++s) {
    t.push(0.55, 1.0);
  }
  mf::PoseSequence seq;
  seq.fps = kFps;
  seq.skeletonId = "leg";
  for (std::size_t i = 0; i < t.root.size(); ++i) {
    seq.frames.push_back(legFrame(0.0, t.root[i], t.extension[i]));
  }
  return seq;
}

mf::PoseSequence randomSequence(const mf::SkeletonSpec& skeleton, std::size_t frames, std::mt19937_64& rng,
                                double fps) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto dof = static_cast<Eigen::Index>(skeleton.dofCount());
  Eigen::VectorXd amp(dof), freq(dof), phase(dof);
  for (Eigen::Index j = 0; j < dof; ++j) {
    amp[j] = 0.6 * unit(rng);
    freq[j] = 0.05 + 0.1 * std::abs(unit(rng));
    phase[j] = 3.0 * unit(rng);
  }
  const Eigen::Vector3d axis = Eigen::Vector3d(unit(rng), unit(rng), unit(rng)).normalized();
  const Eigen::Vector3d vel(0.01 * unit(rng), 0.01 * unit(rng), 0.002 * unit(rng));
  mf::PoseSequence seq;
  seq.fps = fps;
  seq.skeletonId = skeleton.name;
  for (std::size_t t = 0; t < frames; ++t) {
    const double tt = static_cast<double>(t);
    mf::Frame f;
    f.rootPos = Eigen::Vector3d(0.0, 0.0, 1.0) + vel * tt + 0.01 * Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
    f.rootQuat = Eigen::Quaterniond(Eigen::AngleAxisd(0.3 * std::sin(0.05 * tt) + 0.05 * unit(rng), axis));
    f.jointPos.resize(dof);
    for (Eigen::Index j = 0; j < dof; ++j) {
      f.jointPos[j] = amp[j] * std::sin(freq[j] * tt + phase[j]) + 0.01 * unit(rng);
    }
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

mf::MotionDocument document(const mf::SkeletonSpec& skeleton, const mf::PoseSequence& seq) {
  mf::MotionDocument doc;
  doc.skeleton = skeleton;
  doc.sequence = seq;
  return doc;
}

std::filesystem::path scratchDir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / ("motion_forge_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::pair<std::string, std::string>> snapshotTree(const std::filesystem::path& root) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (entry.is_regular_file()) {
      out.emplace_back(std::filesystem::relative(entry.path(), root).generic_string(), readFile(entry.path()));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mftest
