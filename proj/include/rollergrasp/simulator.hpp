#pragma once

// Quasi-static multi-step execution of a grasped-object scenario.
//
// State lives in the world frame. Each substep rebuilds the grasp and the
// active environmental contacts from the object's geometry, solves for the
// object twist and advances both poses with a first-order step (point
// velocity for positions, exp(w dt) for orientations).

#include <array>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "rollergrasp/contact.hpp"

namespace rollergrasp {

struct Pose {
  Vec3 position = Vec3::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  Mat3 rotation() const { return orientation.toRotationMatrix(); }
};

struct SceneObject {
  ObjectGeometry geometry = Sphere{0.02};  // axes in the object frame
  Pose initial;
};

struct GraspTemplate {
  std::array<Vec3, 2> contacts{Vec3::Zero(), Vec3::Zero()};  // gripper frame
  UnitVec3 normal = UnitVec3::y();                           // gripper frame, finger2 -> finger1
  UnitVec3 reference_normal = UnitVec3::z();                 // gripper frame
  Pose ee_initial;
  double mu_braked = 0.809;
  double mu_unbraked = 0.029;
};

struct Surface {
  Vec3 point = Vec3::Zero();
  UnitVec3 normal = UnitVec3::z();
  double mu = 0.0;
  FrictionMode friction_mode = FrictionMode::NormalOnly;
};

// Gripper motion during a step: angular velocity and the velocity of the
// gripper origin, both in world coordinates.
struct EeMotion {
  Vec3 angular = Vec3::Zero();
  Vec3 origin_velocity = Vec3::Zero();
};

struct Step {
  double duration = 0.0;  // s
  double dt = 1e-3;       // s
  std::array<double, 2> pivots{0.0, 0.0};  // rad
  std::array<BrakeState, 2> brakes{BrakeState::Unbraked, BrakeState::Unbraked};
  EeMotion ee;
};

struct Scenario {
  std::string name;
  SceneObject object;
  GraspTemplate grasp;
  std::vector<Surface> environment;
  std::vector<Step> steps;
};

struct SimState {
  double time = 0.0;
  Pose object;
  Pose gripper;
};

struct TrajectoryRecord {
  double time = 0.0;
  Pose object;
  Twist object_twist = Twist::zero(Frame::Stationary);  // at the world origin
  Vec3 object_velocity = Vec3::Zero();                  // of the object's reference point
  Pose gripper;
  SolveStatus status = SolveStatus::Unique;
  std::vector<std::size_t> active_contacts;  // indices into Scenario::environment
};

inline constexpr double kContactGapTolerance = 1e-6;

// Throws SchemaError naming the offending field.
void validate_scenario(const Scenario& s);

SimState initial_state(const Scenario& s);

// World-frame object geometry (cylinder axis rotated by the pose).
ObjectGeometry world_geometry(const ObjectGeometry& local, const Pose& pose);

// Support point of the object in direction `dir`; where the support set is a
// line or a face, the point nearest `hint` is returned.
Vec3 support_point(const ObjectGeometry& local, const Pose& pose, const Vec3& dir, const Vec3& hint);

// Signed distance of the object above the surface (negative when penetrating).
double surface_gap(const ObjectGeometry& local, const Pose& pose, const Surface& surface);

// Grasp rebuilt from the object geometry at the current state with the step's
// pivots and brakes. Throws GraspError/GeometryError when the jaws can no
// longer hold the object antipodally.
AntipodalGrasp current_grasp(const Scenario& s, const SimState& state, const Step& step);

struct ContactSet {
  std::vector<EnvContact> contacts;
  std::vector<std::size_t> surface_index;
};

ContactSet touching_contacts(const Scenario& s, const SimState& state);

Twist ee_twist_at_origin(const EeMotion& ee, const Pose& gripper);

MotionProblem build_problem(const Scenario& s, const SimState& state, const Step& step);

struct StepResult {
  SimState next;
  TrajectoryRecord record;
};

// Record at `state` without integrating.
TrajectoryRecord evaluate(const Scenario& s, const SimState& state, const Step& step);

StepResult step_integrate(const Scenario& s, const SimState& state, const Step& step, double dt);

// Deterministic: identical inputs yield bit-identical records. The last record
// holds the final pose. Throws SimulationError carrying the step index.
std::vector<TrajectoryRecord> run_scenario(const Scenario& s);

}  // namespace rollergrasp
