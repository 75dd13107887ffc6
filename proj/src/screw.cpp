#include "rollergrasp/screw.hpp"

#include <cmath>
#include <string>

namespace rollergrasp {

bool is_finite(const Vec3& v) { return v.allFinite(); }

const Vec3& require_finite(const Vec3& v, const char* what) {
  if (!v.allFinite()) throw ContractViolation(std::string(what) + ": non-finite component");
  return v;
}

UnitVec3::UnitVec3(const Vec3& v) {
  require_finite(v, "unit vector");
  const double n = v.norm();
  if (std::abs(n - 1.0) > kNormalizeTolerance) {
    throw ContractViolation("unit vector: norm " + std::to_string(n) + " is not within 1e-6 of 1");
  }
  v_ = std::abs(n - 1.0) > kUnitTolerance ? Vec3(v / n) : v;
}

UnitVec3 UnitVec3::normalized(const Vec3& v) {
  require_finite(v, "unit vector");
  const double n = v.norm();
  if (n == 0.0) throw ContractViolation("unit vector: cannot normalize the zero vector");
  return UnitVec3(Tag{}, v / n);
}

const char* to_string(Frame f) {
  return f == Frame::Stationary ? "stationary" : "end-effector-relative";
}

Twist::Twist(const Vec3& w, const Vec3& v, Frame f)
    : angular(require_finite(w, "twist angular")), linear(require_finite(v, "twist linear")), frame(f) {}

Twist Twist::from_vector(const Vec6& xi, Frame f) { return Twist(xi.head<3>(), xi.tail<3>(), f); }

Vec6 Twist::as_vector() const {
  Vec6 xi;
  xi << angular, linear;
  return xi;
}

namespace {
void require_same_frame(const Twist& a, const Twist& b) {
  if (a.frame != b.frame) {
    throw ContractViolation(std::string("twist arithmetic across frames: ") + to_string(a.frame) +
                            " vs " + to_string(b.frame));
  }
}
}  // namespace

Twist Twist::operator+(const Twist& o) const {
  require_same_frame(*this, o);
  return Twist(angular + o.angular, linear + o.linear, frame);
}

Twist Twist::operator-(const Twist& o) const {
  require_same_frame(*this, o);
  return Twist(angular - o.angular, linear - o.linear, frame);
}

Twist Twist::operator*(double k) const { return Twist(angular * k, linear * k, frame); }

Twist compose_relative(const Twist& relative, const Twist& ee) {
  if (relative.frame != Frame::EndEffectorRelative || ee.frame != Frame::Stationary) {
    throw ContractViolation("compose_relative expects (end-effector-relative, stationary) twists");
  }
  return Twist(relative.angular + ee.angular, relative.linear + ee.linear, Frame::Stationary);
}

Screw Screw::rotational(const Vec3& axis_point, const UnitVec3& axis_dir, double pitch) {
  require_finite(axis_point, "screw axis point");
  if (!std::isfinite(pitch)) throw ContractViolation("screw pitch must be finite");
  return Screw(Rotational{axis_point, axis_dir, pitch});
}

Screw Screw::translation(const UnitVec3& dir) { return Screw(Translation{dir}); }

const Screw::Rotational& Screw::rotation() const {
  if (const auto* r = std::get_if<Rotational>(&rep_)) return *r;
  throw ContractViolation("screw is a pure translation");
}

const Screw::Translation& Screw::pure_translation() const {
  if (const auto* t = std::get_if<Translation>(&rep_)) return *t;
  throw ContractViolation("screw is rotational");
}

const UnitVec3& Screw::direction() const {
  if (const auto* t = std::get_if<Translation>(&rep_)) return t->dir;
  return std::get<Rotational>(rep_).axis_dir;
}

Vec3 rodrigues_rotate(const UnitVec3& axis, double angle, const Vec3& v) {
  require_finite(v, "rotated vector");
  if (!std::isfinite(angle)) throw ContractViolation("rotation angle must be finite");
  const Vec3& k = axis.vec();
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c));
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(),
       v.z(), 0, -v.x(),
       -v.y(), v.x(), 0;
  return m;
}

Mat3 rotation_matrix(const UnitVec3& axis, double angle) {
  const Mat3 k = skew(axis.vec());
  return Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

Mat3 exp_so3(const Vec3& rotation_vector) {
  const double angle = rotation_vector.norm();
  if (angle == 0.0) return Mat3::Identity();
  return rotation_matrix(UnitVec3::normalized(rotation_vector), angle);
}

Vec3 point_velocity(const Twist& t, const Vec3& p) {
  require_finite(p, "probe point");
  return t.linear - p.cross(t.angular);
}

Twist twist_from_screw(const Screw& s, double magnitude, Frame frame) {
  if (!std::isfinite(magnitude)) throw ContractViolation("screw magnitude must be finite");
  if (s.is_translation()) {
    return Twist(Vec3::Zero(), magnitude * s.pure_translation().dir.vec(), frame);
  }
  const auto& r = s.rotation();
  const Vec3& a = r.axis_dir.vec();
  return Twist(magnitude * a, magnitude * (-a.cross(r.axis_point) + r.pitch * a), frame);
}

Screw screw_from_twist(const Twist& t) {
  const double wn2 = t.angular.squaredNorm();
  if (wn2 == 0.0) {
    if (t.linear.squaredNorm() == 0.0) throw DegenerateTwist();
    return Screw::translation(UnitVec3::normalized(t.linear));
  }
  const double pitch = t.angular.dot(t.linear) / wn2;
  const Vec3 point = t.angular.cross(t.linear) / wn2;
  return Screw::rotational(point, UnitVec3::normalized(t.angular), pitch);
}

}  // namespace rollergrasp
