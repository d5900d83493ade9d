#pragma once

#include <Eigen/Geometry>

#include <cmath>
#include <stdexcept>

namespace motion_forge {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Quat = Eigen::Quaternion<Scalar>;

// Quaternions are stored and serialized in (w, x, y, z) order. Eigen's
// constructor Quaternion(w, x, y, z) follows the same order; only coeffs()
// is laid out as (x, y, z, w).

/// Flips q onto the hemisphere with non-negative scalar part.
template <typename Scalar>
Quat<Scalar> canonicalized(const Quat<Scalar>& q) {
  return q.w() < Scalar(0) ? Quat<Scalar>(-q.w(), -q.x(), -q.y(), -q.z()) : q;
}

/// Log map of a unit quaternion: rotation axis scaled by angle, angle in [0, pi].
/// q and -q map to the same vector.
template <typename Scalar>
Vec3<Scalar> rotationVector(const Quat<Scalar>& q) {
  const Quat<Scalar> c = canonicalized(q);
  const Scalar sinHalf = c.vec().norm();
  if (sinHalf < Scalar(1e-12)) {
    // angle / sin(angle/2) -> 2 / cos(angle/2)
    return c.vec() * (Scalar(2) / c.w());
  }
  const Scalar angle = Scalar(2) * std::atan2(sinHalf, c.w());
  return c.vec() * (angle / sinHalf);
}

/// Exp map, inverse of rotationVector.
template <typename Scalar>
Quat<Scalar> fromRotationVector(const Vec3<Scalar>& v) {
  const Scalar angle = v.norm();
  if (angle < Scalar(1e-15)) {
    return Quat<Scalar>::Identity();
  }
  return Quat<Scalar>(Eigen::AngleAxis<Scalar>(angle, v / angle));
}

template <typename Scalar>
bool isUnit(const Quat<Scalar>& q, Scalar tolerance) {
  return std::abs(q.norm() - Scalar(1)) <= tolerance;
}

/// Shortest-path rotation vector of q1 * conj(q2). Both inputs must be unit
/// quaternions to within 1e-4.
template <typename Scalar>
Vec3<Scalar> quatError(const Quat<Scalar>& q1, const Quat<Scalar>& q2) {
  if (!isUnit(q1, Scalar(1e-4)) || !isUnit(q2, Scalar(1e-4))) {
    throw std::invalid_argument("quatError: inputs must be unit quaternions");
  }
  return rotationVector(Quat<Scalar>(q1 * q2.conjugate()));
}

/// World gravity direction (0, 0, -1) expressed in the frame rotated by q,
/// i.e. R(q)^T g.
template <typename Scalar>
Vec3<Scalar> projectedGravity(const Quat<Scalar>& q) {
  return q.conjugate() * Vec3<Scalar>(Scalar(0), Scalar(0), Scalar(-1));
}

}  // namespace motion_forge
