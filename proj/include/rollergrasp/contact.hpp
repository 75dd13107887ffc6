#pragma once

// Assembles grasp, geometry, brake and environmental constraints with the
// end-effector motion and solves for the object's twist.
//
// All vectors of one MotionProblem live in a single frame with world-aligned
// axes; the ee twist and every solved twist are written at that frame's
// origin. The relative twist is object minus end effector, so every contact
// constraint is a point-velocity condition on it.

#include <optional>
#include <string>
#include <vector>

#include "rollergrasp/grasp.hpp"

namespace rollergrasp {

enum class FrictionMode { NormalOnly, NoSlip };

const char* to_string(FrictionMode m);

struct EnvContact {
  Vec3 point;       // p_e
  UnitVec3 normal;  // n_e, from the surface into the object
  double mu_env = 0.0;
  FrictionMode friction_mode = FrictionMode::NormalOnly;
};

struct MotionProblem {
  AntipodalGrasp grasp;
  ObjectGeometry geometry;
  std::vector<EnvContact> contacts;
  Twist ee_twist;  // stationary frame
};

enum class SolveStatus { Unique, Underdetermined, Jammed, InactiveContact };

const char* to_string(SolveStatus s);

struct MotionSolution {
  SolveStatus status = SolveStatus::Jammed;
  int free_dims = 0;                 // remaining undetermined dimensions
  std::vector<std::size_t> dropped;  // indices of contacts found separating and removed
  Twist object_twist_rel = Twist::zero(Frame::EndEffectorRelative);
  Twist object_twist_world = Twist::zero(Frame::Stationary);
  Twist ee_twist = Twist::zero(Frame::Stationary);
  double residual = 0.0;
};

inline constexpr double kJamRelativeThreshold = 1e-6;
inline constexpr double kJamAbsoluteFloor = 1e-14;
inline constexpr double kSeparationTolerance = 1e-12;

struct ConstraintRow {
  Eigen::Matrix<double, 1, 6> row;
  double rhs = 0.0;
};

// nu_ee = (v_ee - p_e x w_ee) . n_e
double approach_speed(const EnvContact& c, const Twist& ee);

// Normal-direction row on the relative twist: [(p_e x n_e)^T | n_e^T] xi = -nu_ee.
ConstraintRow env_constraint_row(const EnvContact& c, const Twist& ee);

// The two tangential velocity-cancellation rows of a no-slip contact.
std::array<ConstraintRow, 2> env_tangent_rows(const EnvContact& c, const Twist& ee);

// Three homogeneous rows forcing zero relative velocity at a braked finger's contact.
Eigen::Matrix<double, 3, 6> braked_contact_rows(const RollerFinger& finger, const AntipodalGrasp& grasp);

// Homogeneous grasp rows honoring brake states: roller rows for rolling fingers,
// velocity-match rows for braked ones, plus the shared line and spin rows.
Eigen::Matrix<double, Eigen::Dynamic, 6> grasp_rows(const AntipodalGrasp& grasp);

// Basis (as 6 x k columns) of relative motions admitted by the grasp and geometry.
Eigen::Matrix<double, 6, Eigen::Dynamic> admissible_basis(const AntipodalGrasp& grasp, const ObjectGeometry& geom);

MotionSolution solve_object_motion(const MotionProblem& p);

struct MobilityReport {
  MobilityKind kind = MobilityKind::Fixed;
  int free_dims = 0;
  std::vector<Screw> free_screws;
  bool spherical = false;
  std::vector<std::size_t> active_contacts;
};

// Requires a zero ee twist; throws ContractViolation otherwise.
MobilityReport classify_mobility(const MotionProblem& p);

}  // namespace rollergrasp
