#pragma once

// Closed-form manipulation laws for the roller gripper and the static
// friction window of roller-adaptive pick-and-place.

#include <string>

#include "rollergrasp/contact.hpp"

namespace rollergrasp {

// World velocity of a flat object dragged on a surface with normal n_e by
// parallel rollers at pivot theta while the gripper moves with speed nu_ee
// along n_e: -(nu_ee / sin theta) * Proj_e(t), magnitude nu_ee * cot theta.
// Throws KinematicJam when |sin theta| < 1e-9 (rolling direction in the surface plane).
Vec3 planar_drag_velocity(double theta, double nu_ee, const UnitVec3& grasp_normal, const UnitVec3& surface_normal);

// Twirl rate (rad/s about n_e) of a standing cylinder of the given radius
// grasped with pivots theta1 = -theta, theta2 = +theta while the gripper moves
// along n_e at nu_ee: nu_ee / (r tan theta). Zero at theta = +-90 degrees.
// Throws KinematicJam when |tan theta| < 1e-9.
double cylinder_twirl_rate(double theta, double radius, double nu_ee);

struct PickPlaceLoads {
  double f_obj = 0.0;        // object weight, N
  double f_grip = 0.0;       // gripping force, N
  double f_normal = 0.0;     // placement-surface normal force, N
  double mu_roller = 0.029;  // unbraked rolling-direction coefficient (plastic)
  double mu_env = 0.0;       // placement-surface coefficient
};

void validate(const PickPlaceLoads& loads);

// Largest pivot angle (exclusive) at which a lifted object does not slide
// along the rolling direction: arcsin(min(1, mu_r F_g / F_obj)).
double pick_upper_bound(const PickPlaceLoads& loads);

// Smallest pivot angle (exclusive) at which the object slides on early
// contact: arctan(mu_e / (1 - 2 F_obj / F_N)). Throws InfeasibleLoads when
// F_N <= 2 F_obj.
double place_lower_bound(const PickPlaceLoads& loads);

// Strict-inequality predicates evaluated directly at a pivot angle.
bool pick_holds(double theta, const PickPlaceLoads& loads);
bool place_slides(double theta, const PickPlaceLoads& loads);

struct AngleWindow {
  double lower = 0.0;  // rad, exclusive
  double upper = 0.0;  // rad, exclusive
  bool feasible = false;
  std::string reason;  // empty when feasible
};

AngleWindow pick_place_window(const PickPlaceLoads& loads);

// One quasi-static step of asymmetric-brake rolling of a cylinder lying on a
// no-slip table. The gripper's commanded speed along the table normal is
// `vertical_speed`; its speed along the rolling direction (the grasp normal
// projected into the table plane) is compliant and solved so the braked
// contact and the table can both stick. With no finger braked that follow
// speed is zero.
MotionSolution asymmetric_roll_step(const AntipodalGrasp& grasp, const Cylinder& cylinder, const EnvContact& table,
                                    double vertical_speed);

}  // namespace rollergrasp
