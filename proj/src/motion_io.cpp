#include "motion_forge/motion_io.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <ostream>
#include <sstream>

namespace motion_forge {

using nlohmann::json;

namespace {

json vecToJson(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    a.push_back(v[i]);
  }
  return a;
}

json vec3ToJson(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

double number(const json& j, const std::string& what) {
  if (!j.is_number()) {
    throw Error(what + ": expected a number");
  }
  return j.get<double>();
}

Eigen::VectorXd vecFromJson(const json& j, const std::string& what) {
  if (!j.is_array()) {
    throw Error(what + ": expected an array of numbers");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = number(j[i], what);
  }
  return v;
}

Eigen::Vector3d vec3FromJson(const json& j, const std::string& what) {
  const Eigen::VectorXd v = vecFromJson(j, what);
  if (v.size() != 3) {
    throw Error(what + ": expected 3 components");
  }
  return v;
}

std::size_t indexFromJson(const json& j, const std::string& what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw Error(what + ": expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(where + ": missing key '" + key + "'");
  }
  return j.at(key);
}

}  // namespace

json skeletonToJson(const SkeletonSpec& skeleton) {
  json bodies = json::array();
  for (const Body& b : skeleton.bodies) {
    json jb;
    jb["name"] = b.name;
    jb["parent"] = b.parent ? json(*b.parent) : json(nullptr);
    jb["offset"] = vec3ToJson(b.offset);
    jb["joint_axis"] = b.jointAxis ? vec3ToJson(*b.jointAxis) : json(nullptr);
    jb["mass"] = b.mass;
    jb["height_offset"] = b.heightOffset;
    bodies.push_back(std::move(jb));
  }
  json limits = json::array();
  for (const JointLimit& l : skeleton.jointLimits) {
    // JSON has no infinities: unbounded sides are written as null.
    limits.push_back(json::array({std::isfinite(l.lower) ? json(l.lower) : json(nullptr),
                                  std::isfinite(l.upper) ? json(l.upper) : json(nullptr)}));
  }
  json sets = json::object();
  for (const auto& [name, members] : skeleton.bodySets) {
    sets[name] = members;
  }
  return json{{"name", skeleton.name},
              {"bodies", std::move(bodies)},
              {"dof_map", skeleton.dofMap},
              {"body_sets", std::move(sets)},
              {"joint_limits", std::move(limits)}};
}

SkeletonSpec skeletonFromJson(const json& j) {
  const std::string where = "skeleton";
  SkeletonSpec s;
  s.name = j.value("name", std::string{});
  const json& bodies = require(j, "bodies", where);
  if (!bodies.is_array()) {
    throw Error(where + ".bodies: expected an array");
  }
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    const json& jb = bodies[i];
    const std::string at = where + ".bodies[" + std::to_string(i) + "]";
    Body b;
    b.name = require(jb, "name", at).get<std::string>();
    if (jb.contains("parent") && !jb.at("parent").is_null()) {
      b.parent = indexFromJson(jb.at("parent"), at + ".parent");
    }
    if (jb.contains("offset")) {
      b.offset = vec3FromJson(jb.at("offset"), at + ".offset");
    }
    if (jb.contains("joint_axis") && !jb.at("joint_axis").is_null()) {
      b.jointAxis = vec3FromJson(jb.at("joint_axis"), at + ".joint_axis");
    }
    if (jb.contains("mass")) {
      b.mass = number(jb.at("mass"), at + ".mass");
    }
    if (jb.contains("height_offset")) {
      b.heightOffset = number(jb.at("height_offset"), at + ".height_offset");
    }
    s.bodies.push_back(std::move(b));
  }
  if (j.contains("joint_limits")) {
    const json& limits = j.at("joint_limits");
    if (!limits.is_array()) {
      throw Error(where + ".joint_limits: expected an array");
    }
    for (std::size_t k = 0; k < limits.size(); ++k) {
      const std::string at = where + ".joint_limits[" + std::to_string(k) + "]";
      if (!limits[k].is_array() || limits[k].size() != 2) {
        throw Error(at + ": expected [lower, upper]");
      }
      const double inf = std::numeric_limits<double>::infinity();
      s.jointLimits.push_back({limits[k][0].is_null() ? -inf : number(limits[k][0], at),
                               limits[k][1].is_null() ? inf : number(limits[k][1], at)});
    }
  }
  if (j.contains("dof_map")) {
    const json& dm = j.at("dof_map");
    if (!dm.is_array()) {
      throw Error(where + ".dof_map: expected an array");
    }
    for (std::size_t k = 0; k < dm.size(); ++k) {
      s.dofMap.push_back(indexFromJson(dm[k], where + ".dof_map[" + std::to_string(k) + "]"));
    }
  } else {
    assignDefaultDofMap(s);
  }
  if (j.contains("body_sets")) {
    for (const auto& [name, members] : j.at("body_sets").items()) {
      std::vector<std::size_t> idx;
      for (std::size_t k = 0; k < members.size(); ++k) {
        idx.push_back(indexFromJson(members[k], where + ".body_sets." + name));
      }
      s.bodySets[name] = std::move(idx);
    }
  }
  s.validate();
  return s;
}

json frameToJson(const Frame& f) {
  json jf;
  jf["root_pos"] = vec3ToJson(f.rootPos);
  jf["root_quat"] = json::array({f.rootQuat.w(), f.rootQuat.x(), f.rootQuat.y(), f.rootQuat.z()});
  jf["joint_pos"] = vecToJson(f.jointPos);
  if (f.jointVel) {
    jf["joint_vel"] = vecToJson(*f.jointVel);
  }
  if (f.bodyPos) {
    json bp = json::array();
    for (const auto& p : *f.bodyPos) {
      bp.push_back(vec3ToJson(p));
    }
    jf["body_pos"] = std::move(bp);
  }
  if (f.contactForce) {
    jf["contact_force"] = vecToJson(*f.contactForce);
  }
  if (f.bodyForce) {
    jf["body_force"] = vecToJson(*f.bodyForce);
  }
  return jf;
}

Frame frameFromJson(const json& j) {
  const std::string where = "frame";
  Frame f;
  f.rootPos = vec3FromJson(require(j, "root_pos", where), where + ".root_pos");
  const Eigen::VectorXd q = vecFromJson(require(j, "root_quat", where), where + ".root_quat");
  if (q.size() != 4) {
    throw Error(where + ".root_quat: expected [w, x, y, z]");
  }
  f.rootQuat = Eigen::Quaterniond(q[0], q[1], q[2], q[3]);
  f.jointPos = vecFromJson(require(j, "joint_pos", where), where + ".joint_pos");
  if (j.contains("joint_vel")) {
    f.jointVel = vecFromJson(j.at("joint_vel"), where + ".joint_vel");
  }
  if (j.contains("body_pos")) {
    std::vector<Eigen::Vector3d> bp;
    for (const json& p : j.at("body_pos")) {
      bp.push_back(vec3FromJson(p, where + ".body_pos"));
    }
    f.bodyPos = std::move(bp);
  }
  if (j.contains("contact_force")) {
    f.contactForce = vecFromJson(j.at("contact_force"), where + ".contact_force");
  }
  if (j.contains("body_force")) {
    f.bodyForce = vecFromJson(j.at("body_force"), where + ".body_force");
  }
  return f;
}

json motionToJson(const MotionDocument& doc) {
  json frames = json::array();
  for (std::size_t t = 0; t < doc.sequence.frames.size(); ++t) {
    json jf = frameToJson(doc.sequence.frames[t]);
    if (t < doc.frameTags.size() && !doc.frameTags[t].empty()) {
      jf["tag"] = doc.frameTags[t];
    }
    frames.push_back(std::move(jf));
  }
  return json{{"format", "motion-forge"},
              {"version", kMotionFormatVersion},
              {"fps", doc.sequence.fps},
              {"skeleton", skeletonToJson(doc.skeleton)},
              {"frames", std::move(frames)}};
}

MotionDocument motionFromJson(const json& j) {
  if (!j.is_object()) {
    throw Error("motion document: expected a JSON object");
  }
  const json& version = require(j, "version", "motion document");
  if (!version.is_number_integer() || version.get<int>() != kMotionFormatVersion) {
    throw Error("motion document: unsupported version " + version.dump());
  }
  MotionDocument doc;
  doc.skeleton = skeletonFromJson(require(j, "skeleton", "motion document"));
  doc.sequence.fps = number(require(j, "fps", "motion document"), "fps");
  doc.sequence.skeletonId = doc.skeleton.name;
  const json& frames = require(j, "frames", "motion document");
  if (!frames.is_array()) {
    throw Error("motion document: frames must be an array");
  }
  bool anyTag = false;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    try {
      doc.sequence.frames.push_back(frameFromJson(frames[t]));
    } catch (const Error& e) {
      throw Error("frames[" + std::to_string(t) + "]: " + e.what());
    }
    std::string tag;
    if (frames[t].contains("tag")) {
      tag = frames[t].at("tag").get<std::string>();
      anyTag = true;
    }
    doc.frameTags.push_back(std::move(tag));
  }
  if (!anyTag) {
    doc.frameTags.clear();
  }
  validateSequence(doc.sequence, doc.skeleton);
  return doc;
}

json readJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void writeJsonFile(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

MotionDocument readMotionFile(const std::filesystem::path& path) {
  const json j = readJsonFile(path);
  try {
    return motionFromJson(j);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void writeMotionFile(const std::filesystem::path& path, const MotionDocument& doc) {
  writeJsonFile(path, motionToJson(doc));
}

std::string formatNumber(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void writeMotionCsv(std::ostream& out, const PoseSequence& seq) {
  const Eigen::Index dof = seq.frames.empty() ? 0 : seq.frames.front().jointPos.size();
  out << "frame,root_x,root_y,root_z,quat_w,quat_x,quat_y,quat_z";
  for (Eigen::Index j = 0; j < dof; ++j) {
    out << ",joint_" << j;
  }
  out << '\n';
  for (std::size_t t = 0; t < seq.frames.size(); ++t) {
    const Frame& f = seq.frames[t];
    out << t;
    for (const double v : {f.rootPos.x(), f.rootPos.y(), f.rootPos.z(), f.rootQuat.w(),
                           f.rootQuat.x(), f.rootQuat.y(), f.rootQuat.z()}) {
      out << ',' << formatNumber(v);
    }
    for (Eigen::Index j = 0; j < f.jointPos.size(); ++j) {
      out << ',' << formatNumber(f.jointPos[j]);
    }
    out << '\n';
  }
}

}  // namespace motion_forge
