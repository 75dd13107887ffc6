#pragma once

// Vector, rotation, twist and screw algebra shared by every other module.
//
// Twists are stored as (angular, linear) pairs expressed at the origin of the
// frame they are written in, matching the [w | v] column layout of the grasp
// constraint rows.

#include <Eigen/Dense>

#include <variant>

#include "rollergrasp/errors.hpp"

namespace rollergrasp {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kUnitTolerance = 1e-9;
inline constexpr double kNormalizeTolerance = 1e-6;

bool is_finite(const Vec3& v);

// Throws ContractViolation naming `what` when v has a NaN/Inf component.
const Vec3& require_finite(const Vec3& v, const char* what);

class UnitVec3 {
 public:
  // Inputs within 1e-6 of unit length are normalized; anything further off is rejected.
  explicit UnitVec3(const Vec3& v);
  UnitVec3(double x, double y, double z) : UnitVec3(Vec3(x, y, z)) {}

  // Normalizes any nonzero finite vector.
  static UnitVec3 normalized(const Vec3& v);

  static UnitVec3 x() { return UnitVec3(1, 0, 0); }
  static UnitVec3 y() { return UnitVec3(0, 1, 0); }
  static UnitVec3 z() { return UnitVec3(0, 0, 1); }

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }
  double operator[](int i) const { return v_[i]; }
  UnitVec3 operator-() const { return UnitVec3(Tag{}, -v_); }

 private:
  struct Tag {};
  UnitVec3(Tag, const Vec3& v) : v_(v) {}

  Vec3 v_;
};

enum class Frame { EndEffectorRelative, Stationary };

const char* to_string(Frame f);

struct Twist {
  Vec3 angular = Vec3::Zero();  // rad/s
  Vec3 linear = Vec3::Zero();   // m/s, velocity of the frame-origin point
  Frame frame = Frame::Stationary;

  Twist() = default;
  Twist(const Vec3& w, const Vec3& v, Frame f);

  static Twist zero(Frame f) { return Twist(Vec3::Zero(), Vec3::Zero(), f); }
  static Twist from_vector(const Vec6& xi, Frame f);

  Vec6 as_vector() const;
  bool is_zero() const { return angular.isZero(0.0) && linear.isZero(0.0); }

  Twist operator+(const Twist& o) const;
  Twist operator-(const Twist& o) const;
  Twist operator*(double k) const;
};

// Object twist in the stationary frame from its gripper-relative twist and the
// gripper twist, both written at the same origin.
Twist compose_relative(const Twist& relative, const Twist& ee);

class Screw {
 public:
  struct Rotational {
    Vec3 axis_point;
    UnitVec3 axis_dir;
    double pitch;  // m/rad
  };
  struct Translation {
    UnitVec3 dir;
  };

  static Screw rotational(const Vec3& axis_point, const UnitVec3& axis_dir, double pitch);
  static Screw translation(const UnitVec3& dir);

  bool is_translation() const { return std::holds_alternative<Translation>(rep_); }
  const Rotational& rotation() const;
  const Translation& pure_translation() const;

  // Direction of the motion: the axis for rotational screws, the travel direction otherwise.
  const UnitVec3& direction() const;

 private:
  explicit Screw(std::variant<Rotational, Translation> r) : rep_(std::move(r)) {}
  std::variant<Rotational, Translation> rep_;
};

Vec3 rodrigues_rotate(const UnitVec3& axis, double angle, const Vec3& v);

// Rotation matrix exp([axis]x angle).
Mat3 rotation_matrix(const UnitVec3& axis, double angle);

// exp of a rotation vector (axis * angle); identity for the zero vector.
Mat3 exp_so3(const Vec3& rotation_vector);

// Velocity of the body point at p: v - p x w.
Vec3 point_velocity(const Twist& t, const Vec3& p);

Twist twist_from_screw(const Screw& s, double magnitude, Frame frame = Frame::EndEffectorRelative);

// Throws DegenerateTwist for the zero twist.
Screw screw_from_twist(const Twist& t);

Mat3 skew(const Vec3& v);

}  // namespace rollergrasp
