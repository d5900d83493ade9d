#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mftest;
using Eigen::Matrix3d;
using Eigen::Matrix4d;
using Eigen::Vector3d;

namespace {

// Rodrigues rotation matrix, written out by hand.
Matrix3d rodrigues(const Vector3d& axis, double angle) {
  Matrix3d k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Matrix3d::Identity() + std::sin(angle) * k + (1 - std::cos(angle)) * k * k;
}

Matrix3d quatMatrix(const Eigen::Quaterniond& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Matrix3d r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),  //
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),   //
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

Matrix4d homogeneous(const Matrix3d& r, const Vector3d& p) {
  Matrix4d t = Matrix4d::Identity();
  t.topLeftCorner<3, 3>() = r;
  t.topRightCorner<3, 1>() = p;
  return t;
}

// Independent FK: T_i = T_parent * Trans(offset_i) * Rot(axis_i, q_i).
std::vector<Vector3d> oracleFk(const mf::SkeletonSpec& s, const mf::Frame& f) {
  std::vector<Matrix4d> world(s.bodies.size());
  std::vector<int> jointOf(s.bodies.size(), -1);
  for (std::size_t j = 0; j < s.dofMap.size(); ++j) {
    jointOf[s.dofMap[j]] = static_cast<int>(j);
  }
  std::vector<Vector3d> out;
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    const mf::Body& b = s.bodies[i];
    const Matrix4d parent = b.parent ? world[*b.parent] : homogeneous(quatMatrix(f.rootQuat), f.rootPos);
    Matrix3d rot = Matrix3d::Identity();
    if (jointOf[i] >= 0) {
      rot = rodrigues(*b.jointAxis, f.jointPos[jointOf[i]]);
    }
    world[i] = parent * homogeneous(Matrix3d::Identity(), b.offset) * homogeneous(rot, Vector3d::Zero());
    out.push_back(world[i].topRightCorner<3, 1>());
  }
  return out;
}

mf::SkeletonSpec chain(std::size_t links, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  mf::SkeletonSpec s;
  s.name = "chain";
  s.bodies.push_back({"root", std::nullopt, Vector3d::Zero(), std::nullopt, 1.0, 0.0});
  for (std::size_t i = 1; i < links; ++i) {
    const std::size_t parent = i == 1 ? 0 : std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    s.bodies.push_back({"b" + std::to_string(i), parent, Vector3d(n(rng), n(rng), n(rng)) * 0.3,
                        Vector3d(n(rng), n(rng), n(rng)).normalized(), 1.0, 0.0});
  }
  mf::assignDefaultDofMap(s);
  return s;
}

}  // namespace

TEST(ForwardKinematics, SingleBody) {
  mf::SkeletonSpec s;
  s.bodies.push_back({"root", std::nullopt, Vector3d::Zero(), std::nullopt, 1.0, 0.0});
  mf::assignDefaultDofMap(s);
  mf::Frame f;
  f.rootPos = Vector3d(0, 0, 1);
  f.jointPos.resize(0);
  const mf::BodyPoses p = mf::forwardKinematics(f, s);
  EXPECT_EQ(p.positions[0], Vector3d(0, 0, 1));
  EXPECT_EQ(mf::minBodyHeight(f, s), 1.0);
}

TEST(ForwardKinematics, TwoBodyZeroAngle) {
  mf::SkeletonSpec s;
  s.bodies.push_back({"root", std::nullopt, Vector3d::Zero(), std::nullopt, 1.0, 0.0});
  s.bodies.push_back({"child", 0, Vector3d(0, 0, -0.5), Vector3d::UnitY(), 1.0, 0.0});
  mf::assignDefaultDofMap(s);
  mf::Frame f;
  f.rootPos = Vector3d(0, 0, 1);
  f.jointPos = Eigen::VectorXd::Zero(1);
  EXPECT_EQ(mf::forwardKinematics(f, s).positions[1], Vector3d(0, 0, 0.5));
}

TEST(ForwardKinematics, PlanarChainQuarterTurns) {
  mf::SkeletonSpec s;
  s.bodies.push_back({"root", std::nullopt, Vector3d::Zero(), std::nullopt, 1.0, 0.0});
  s.bodies.push_back({"l1", 0, Vector3d::Zero(), Vector3d::UnitZ(), 1.0, 0.0});
  s.bodies.push_back({"l2", 1, Vector3d(1, 0, 0), Vector3d::UnitZ(), 1.0, 0.0});
  s.bodies.push_back({"tip", 2, Vector3d(1, 0, 0), std::nullopt, 1.0, 0.0});
  mf::assignDefaultDofMap(s);
  mf::Frame f;
  f.jointPos = Eigen::Vector2d(std::numbers::pi / 2, std::numbers::pi / 2);
  const mf::BodyPoses p = mf::forwardKinematics(f, s);
  const std::vector<Vector3d> oracle = oracleFk(s, f);
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    EXPECT_LT((p.positions[i] - oracle[i]).norm(), 1e-12) << "body " << i;
  }
  EXPECT_LT((p.positions[3] - Vector3d(-1, 1, 0)).norm(), 1e-12);
}

TEST(ForwardKinematics, MatchesHomogeneousOracleOnRandomTrees) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const mf::SkeletonSpec s = chain(10, rng);
    const mf::PoseSequence seq = randomSequence(s, 5, rng);
    for (std::size_t t = 0; t < seq.size(); ++t) {
      const mf::BodyPoses p = mf::forwardKinematics(seq, s, t);
      const std::vector<Vector3d> oracle = oracleFk(s, seq.frames[t]);
      double zmin = oracle[0].z();
      for (std::size_t i = 0; i < oracle.size(); ++i) {
        EXPECT_LT((p.positions[i] - oracle[i]).norm(), 1e-12);
        zmin = std::min(zmin, oracle[i].z());
      }
      EXPECT_NEAR(mf::minBodyHeight(seq, s, t), zmin, 1e-12);
    }
  }
}

TEST(ForwardKinematics, RestPoseIsCumulativeOffsets) {
  const mf::SkeletonSpec s = humanoidSkeleton();
  mf::Frame f;
  f.jointPos = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.dofCount()));
  const mf::BodyPoses p = mf::forwardKinematics(f, s);
  for (std::size_t i = 0; i < s.bodies.size(); ++i) {
    Vector3d expected = Vector3d::Zero();
    for (std::optional<std::size_t> b = i; b; b = s.bodies[*b].parent) {
      expected += s.bodies[*b].offset;
    }
    EXPECT_LT((p.positions[i] - expected).norm(), 1e-15);
  }
}

TEST(ForwardKinematics, TranslationEquivariance) {
  std::mt19937_64 rng(9);
  const mf::SkeletonSpec s = humanoidSkeleton();
  mf::PoseSequence seq = randomSequence(s, 20, rng);
  const Vector3d d(0.25, -1.5, 0.125);
  for (mf::Frame& f : seq.frames) {
    // dyadic root positions keep the translated sums exact
    f.rootPos = (f.rootPos * 1024).array().round() / 1024;
    const mf::BodyPoses a = mf::forwardKinematics(f, s);
    mf::Frame moved = f;
    moved.rootPos += d;
    const mf::BodyPoses b = mf::forwardKinematics(moved, s);
    for (std::size_t i = 0; i < a.positions.size(); ++i) {
      EXPECT_LT((b.positions[i] - (a.positions[i] + d)).norm(), 1e-14);
    }
  }
}

TEST(ForwardKinematics, FlagsStaleCache) {
  const mf::SkeletonSpec s = legSkeleton();
  mf::Frame f = legFrame(0, 1.0, 0.9);
  f.bodyPos = mf::forwardKinematics(f, s).positions;
  EXPECT_FALSE(mf::forwardKinematics(f, s).cacheStale);
  (*f.bodyPos)[3].z() += 1e-6;
  EXPECT_TRUE(mf::forwardKinematics(f, s).cacheStale);
}

TEST(ForwardKinematics, DofMismatchThrows) {
  const mf::SkeletonSpec s = legSkeleton();
  mf::Frame f = legFrame(0, 1.0, 0.9);
  f.jointPos = Eigen::VectorXd::Zero(3);
  EXPECT_THROW(mf::forwardKinematics(f, s), mf::Error);
  mf::PoseSequence seq;
  seq.fps = 50;
  seq.frames = {legFrame(0, 1.0, 0.9)};
  EXPECT_THROW(mf::forwardKinematics(seq, s, 1), mf::Error);
}

TEST(MinBodyHeight, LowestOfTwoBodies) {
  mf::SkeletonSpec s;
  s.bodies.push_back({"root", std::nullopt, Vector3d::Zero(), std::nullopt, 1.0, 0.0});
  s.bodies.push_back({"low", 0, Vector3d(0, 0, -0.82), std::nullopt, 1.0, 0.0});
  mf::assignDefaultDofMap(s);
  mf::Frame f;
  f.rootPos = Vector3d(0, 0, 0.8);
  f.jointPos.resize(0);
  EXPECT_NEAR(mf::minBodyHeight(f, s), -0.02, 1e-15);
}

TEST(MinBodyHeight, LegExtension) {
  const mf::SkeletonSpec s = legSkeleton();
  for (const double e : {0.4, 0.6, 0.95, 1.0}) {
    EXPECT_NEAR(mf::minBodyHeight(legFrame(0.3, 2.0, e), s), 2.0 - e, 1e-12);
  }
}

TEST(MinBodyHeight, HeightOffsetApplies) {
  mf::SkeletonSpec s = legSkeleton();
  s.bodies[3].heightOffset = -0.05;
  EXPECT_NEAR(mf::minBodyHeight(legFrame(0, 1.0, 0.9), s), 0.05, 1e-12);
}

TEST(MinBodyHeight, BoundsEveryBody) {
  std::mt19937_64 rng(4);
  const mf::SkeletonSpec s = humanoidSkeleton();
  const mf::PoseSequence seq = randomSequence(s, 100, rng);
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const double zmin = mf::minBodyHeight(seq, s, t);
    for (const Vector3d& p : mf::forwardKinematics(seq, s, t).positions) {
      EXPECT_LE(zmin, p.z());
    }
  }
}

TEST(SkeletonSpec, ValidationErrors) {
  mf::SkeletonSpec s = legSkeleton();
  s.bodies[2].parent = 3;
  EXPECT_THROW(s.validate(), mf::Error);
  s = legSkeleton();
  s.bodies[1].parent.reset();
  EXPECT_THROW(s.validate(), mf::Error);
  s = legSkeleton();
  s.bodySets["feet"] = {7};
  EXPECT_THROW(s.validate(), mf::Error);
  s = legSkeleton();
  s.jointLimits[0] = {1.0, -1.0};
  EXPECT_THROW(s.validate(), mf::Error);
  s = legSkeleton();
  s.bodies[1].jointAxis = Vector3d(0, 2, 0);
  EXPECT_THROW(s.validate(), mf::Error);
}

TEST(SkeletonSpec, JointsInSet) {
  const mf::SkeletonSpec s = humanoidSkeleton();
  const std::vector<std::size_t> knees = s.jointsInSet("knees");
  ASSERT_EQ(knees.size(), 2u);
  EXPECT_EQ(s.dofMap[knees[0]], 5u);
  EXPECT_EQ(s.dofMap[knees[1]], 9u);
  EXPECT_TRUE(s.jointsInSet("missing").empty());
}

TEST(ValidateSequence, Invariants) {
  const mf::SkeletonSpec s = legSkeleton();
  mf::PoseSequence seq;
  seq.fps = 50;
  EXPECT_THROW(mf::validateSequence(seq, s), mf::Error);
  seq.frames = {legFrame(0, 1, 0.9)};
  EXPECT_NO_THROW(mf::validateSequence(seq, s));
  seq.frames[0].rootQuat = Eigen::Quaterniond(1.001, 0, 0, 0);
  EXPECT_THROW(mf::validateSequence(seq, s), mf::Error);
  seq.frames[0].rootQuat.setIdentity();
  seq.fps = 0;
  EXPECT_THROW(mf::validateSequence(seq, s), mf::Error);
}

TEST(FiniteDifference, ConstantIsZero) {
  mf::PoseSequence seq;
  seq.fps = 30;
  seq.frames.assign(5, legFrame(0.2, 1.0, 0.9));
  const mf::Velocities v = mf::finiteDifferenceVelocities(seq, mf::VelocityUnits::PerSecond);
  for (std::size_t t = 0; t < 5; ++t) {
    EXPECT_EQ(v.joint[t].norm(), 0.0);
    EXPECT_EQ(v.rootLinear[t].norm(), 0.0);
    EXPECT_EQ(v.rootAngular[t].norm(), 0.0);
  }
}

TEST(FiniteDifference, RootHeightExample) {
  mf::PoseSequence seq;
  seq.fps = 50;
  for (const double z : {0.0, 0.1, 0.3}) {
    seq.frames.push_back(legFrame(0, z, 0.9));
  }
  const mf::Velocities v = mf::finiteDifferenceVelocities(seq);
  EXPECT_NEAR(v.rootLinear[0].z(), 0.1, 1e-15);
  EXPECT_NEAR(v.rootLinear[1].z(), 0.2, 1e-15);
  EXPECT_NEAR(v.rootLinear[2].z(), 0.2, 1e-15);
  const mf::Velocities ps = mf::finiteDifferenceVelocities(seq, mf::VelocityUnits::PerSecond);
  EXPECT_NEAR(ps.rootLinear[0].z(), 5.0, 1e-12);
}

TEST(FiniteDifference, MatchesNaiveLoop) {
  std::mt19937_64 rng(21);
  const mf::SkeletonSpec s = humanoidSkeleton();
  const mf::PoseSequence seq = randomSequence(s, 50, rng);
  const mf::Velocities v = mf::finiteDifferenceVelocities(seq);
  for (std::size_t t = 0; t < 50; ++t) {
    const std::size_t a = t + 1 < 50 ? t : t - 1;
    for (Eigen::Index j = 0; j < seq.frames[t].jointPos.size(); ++j) {
      EXPECT_EQ(v.joint[t][j], seq.frames[a + 1].jointPos[j] - seq.frames[a].jointPos[j]);
    }
    for (int k = 0; k < 3; ++k) {
      EXPECT_EQ(v.rootLinear[t][k], seq.frames[a + 1].rootPos[k] - seq.frames[a].rootPos[k]);
    }
    const Eigen::AngleAxisd aa(seq.frames[a + 1].rootQuat * seq.frames[a].rootQuat.conjugate());
    EXPECT_LT((v.rootAngular[t] - aa.angle() * aa.axis()).norm(), 1e-9);
  }
}

TEST(FiniteDifference, LinearSignalHasConstantVelocity) {
  mf::PoseSequence seq;
  seq.fps = 50;
  for (int t = 0; t < 20; ++t) {
    mf::Frame f;
    f.rootPos = Vector3d(0.5, -0.25, 0.125) * t;
    f.jointPos = Eigen::Vector2d(0.0625 * t, -0.03125 * t);
    seq.frames.push_back(f);
  }
  const mf::Velocities v = mf::finiteDifferenceVelocities(seq);
  for (int t = 0; t < 20; ++t) {
    EXPECT_EQ(v.rootLinear[t], Vector3d(0.5, -0.25, 0.125));
    EXPECT_EQ(v.joint[t], Eigen::Vector2d(0.0625, -0.03125));
  }
}

TEST(FiniteDifference, NeedsTwoFrames) {
  mf::PoseSequence seq;
  seq.fps = 50;
  seq.frames = {legFrame(0, 1, 0.9)};
  EXPECT_THROW(mf::finiteDifferenceVelocities(seq), mf::Error);
}

TEST(Reversed, ReversesFramesAndNegatesStoredVelocity) {
  mf::PoseSequence seq;
  seq.fps = 50;
  for (int t = 0; t < 4; ++t) {
    mf::Frame f = legFrame(0.1 * t, 1.0, 0.9);
    f.jointVel = Eigen::Vector2d(t, -t);
    seq.frames.push_back(f);
  }
  const mf::PoseSequence r = mf::reversed(seq);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r.frames[0].rootPos, seq.frames[3].rootPos);
  EXPECT_EQ(*r.frames[0].jointVel, Eigen::Vector2d(-3, 3));
}
