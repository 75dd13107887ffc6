#pragma once

// Two-roller antipodal grasp: roller axes, the 4x6 rolling/soft-contact
// constraint matrix, and the grasp's free-motion screws.

#include <array>
#include <utility>
#include <variant>
#include <vector>

#include "rollergrasp/screw.hpp"

namespace rollergrasp {

enum class BrakeState { Unbraked, Braked };

const char* to_string(BrakeState b);

struct RollerFinger {
  Vec3 contact_point;      // m
  double pivot_angle = 0;  // rad, (-pi, pi]
  BrakeState brake = BrakeState::Unbraked;
  double mu_braked = 0.809;
  double mu_unbraked = 0.029;
};

// Wraps any angle into (-pi, pi].
double wrap_angle(double angle);

class AntipodalGrasp {
 public:
  // Validates the antipodal invariants; throws GraspError("not antipodal: ...").
  // grasp_normal points from finger2's contact toward finger1's contact.
  AntipodalGrasp(RollerFinger finger1, RollerFinger finger2, const UnitVec3& grasp_normal,
                 const UnitVec3& reference_normal);

  const RollerFinger& finger(int index) const;  // index 1 or 2
  const UnitVec3& grasp_normal() const { return normal_; }
  const UnitVec3& reference_normal() const { return reference_; }
  const UnitVec3& axis(int index) const;  // cached roller axis
  Vec3 midpoint() const;
  bool any_braked() const;

  AntipodalGrasp with_pivots(double theta1, double theta2) const;
  AntipodalGrasp with_brakes(BrakeState b1, BrakeState b2) const;

 private:
  std::array<RollerFinger, 2> fingers_;
  UnitVec3 normal_;
  UnitVec3 reference_;
  std::array<UnitVec3, 2> axes_;
};

// omega_i = Rot(n, theta_i) * n_e.
UnitVec3 roller_axis(const AntipodalGrasp& grasp, int finger_index);

struct ConstraintMatrix {
  enum Row { kRoll1 = 0, kRoll2 = 1, kLine = 2, kSpin = 3 };
  static constexpr std::array<const char*, 4> kRowLabels{"roll1", "roll2", "line", "spin"};

  Eigen::Matrix<double, 4, 6> rows;  // columns [angular | linear]
  int rank = 0;                      // numerical rank at the generic-grasp tolerance
};

inline constexpr double kRankTolerance = 1e-10;
inline constexpr double kParallelAxisThreshold = 1e-8;
inline constexpr double kCylinderAlignTolerance = 1e-6;

// A single constraint row [(p x d)^T | d^T]: zero velocity of the point p along d.
Eigen::Matrix<double, 1, 6> point_direction_row(const Vec3& p, const Vec3& d);

ConstraintMatrix build_constraint_matrix(const AntipodalGrasp& grasp);

// Orthonormal kernel basis of any m x 6 matrix. Singular values at or below
// tol * sigma_max count as zero.
std::vector<Twist> numeric_null_space(const Eigen::Matrix<double, Eigen::Dynamic, 6>& m, double tol);
std::vector<Twist> numeric_null_space(const ConstraintMatrix& m, double tol);

// Internal/external bisector screws through the midpoint, or the rotation and
// tangential translation for parallel roller axes.
std::pair<Screw, Screw> analytic_free_screws(const AntipodalGrasp& grasp);

// True when the roller axes (as lines, ignoring sign) are parallel.
bool axes_parallel(const AntipodalGrasp& grasp);

struct Sphere {
  double radius;
};
struct Cylinder {
  double radius;
  UnitVec3 axis;
  double half_length = 0;  // only used by the simulator for end-face support points
};
struct FlatBox {
  Vec3 half_extents = Vec3::Zero();  // only used by the simulator
};
struct GeneralCurved {
  std::array<double, 2> curvatures1;
  std::array<double, 2> curvatures2;
};

using ObjectGeometry = std::variant<Sphere, Cylinder, FlatBox, GeneralCurved>;

void validate_geometry(const ObjectGeometry& geom);
const char* geometry_name(const ObjectGeometry& geom);

enum class MobilityKind { TwoDof, OneDof, Fixed, TranslationOnly };

const char* to_string(MobilityKind k);

struct MobilityClass {
  MobilityKind kind = MobilityKind::Fixed;
  std::vector<Screw> screws;  // basis of the admissible relative motion
  bool spherical = false;     // sphere: passive rotation about the midpoint
};

// Throws GeometryError("invalid cylinder grasp") when the cylinder axis is
// parallel to the grasp normal.
MobilityClass geometry_admissible_motions(const AntipodalGrasp& grasp, const ObjectGeometry& geom);

}  // namespace rollergrasp
