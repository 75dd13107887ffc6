#include "rollergrasp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rollergrasp {

namespace {

constexpr double kAlignTolerance = 1e-9;

double sign_or_zero(double x) {
  if (std::abs(x) < kAlignTolerance) return 0.0;
  return x > 0.0 ? 1.0 : -1.0;
}

Vec3 project_to_plane(const Vec3& x, const Vec3& plane_point, const Vec3& normal) {
  return x - (x - plane_point).dot(normal) * normal;
}

struct SupportVisitor {
  const Pose& pose;
  const Vec3& dir;
  const Vec3& hint;

  Vec3 operator()(const Sphere& s) const { return pose.position + s.radius * dir; }

  Vec3 operator()(const Cylinder& c) const {
    const Vec3& center = pose.position;
    const Vec3 axis = pose.rotation() * c.axis.vec();
    const double along = dir.dot(axis);
    const Vec3 radial = dir - along * axis;
    if (radial.norm() < kAlignTolerance) {
      return center + sign_or_zero(along) * c.half_length * axis;  // end-face center
    }
    const Vec3 rim = center + c.radius * radial.normalized();
    if (std::abs(along) < kAlignTolerance) {
      double s = (hint - center).dot(axis);
      if (c.half_length > 0.0) s = std::clamp(s, -c.half_length, c.half_length);
      return rim + s * axis;
    }
    return rim + sign_or_zero(along) * c.half_length * axis;
  }

  Vec3 operator()(const FlatBox& b) const {
    const Mat3 r = pose.rotation();
    const Vec3 local = r.transpose() * dir;
    Vec3 offset = Vec3::Zero();
    int face_axis = -1;
    for (int k = 0; k < 3; ++k) {
      offset += sign_or_zero(local[k]) * b.half_extents[k] * r.col(k);
      if (std::abs(std::abs(local[k]) - 1.0) < kAlignTolerance) face_axis = k;
    }
    if (face_axis < 0) return pose.position + offset;
    const Vec3 face_point = pose.position + sign_or_zero(local[face_axis]) * b.half_extents[face_axis] * r.col(face_axis);
    return project_to_plane(hint, face_point, dir);
  }

  Vec3 operator()(const GeneralCurved&) const {
    throw GeometryError("curved objects carry no surface for support-point computation");
  }
};

}  // namespace

ObjectGeometry world_geometry(const ObjectGeometry& local, const Pose& pose) {
  if (const auto* c = std::get_if<Cylinder>(&local)) {
    Cylinder w = *c;
    w.axis = UnitVec3::normalized(pose.rotation() * c->axis.vec());
    return w;
  }
  return local;
}

Vec3 support_point(const ObjectGeometry& local, const Pose& pose, const Vec3& dir, const Vec3& hint) {
  return std::visit(SupportVisitor{pose, dir, hint}, local);
}

double surface_gap(const ObjectGeometry& local, const Pose& pose, const Surface& surface) {
  const Vec3& n = surface.normal.vec();
  return (support_point(local, pose, -n, pose.position) - surface.point).dot(n);
}

namespace {

Vec3 finger_nominal(const Scenario& s, const Pose& gripper, int i) {
  return gripper.position + gripper.rotation() * s.grasp.contacts[i];
}

void check_jaw_alignment(const ObjectGeometry& local, const Pose& pose, const Vec3& n) {
  if (const auto* b = std::get_if<FlatBox>(&local)) {
    const Vec3 in_box = pose.rotation().transpose() * n;
    if (std::abs(in_box.cwiseAbs().maxCoeff() - 1.0) > kAlignTolerance) {
      throw GraspError("not antipodal: no box face is perpendicular to the grasp normal");
    }
    (void)b;
  } else if (const auto* c = std::get_if<Cylinder>(&local)) {
    const Vec3 axis = pose.rotation() * c->axis.vec();
    if (std::abs(axis.dot(n)) > kAlignTolerance) {
      throw GraspError("not antipodal: cylinder axis is not perpendicular to the grasp normal");
    }
  }
}

}  // namespace

AntipodalGrasp current_grasp(const Scenario& s, const SimState& state, const Step& step) {
  const Mat3 r_ee = state.gripper.rotation();
  const UnitVec3 n = UnitVec3::normalized(r_ee * s.grasp.normal.vec());
  const UnitVec3 ref = UnitVec3::normalized(r_ee * s.grasp.reference_normal.vec());
  const ObjectGeometry& geom = s.object.geometry;
  check_jaw_alignment(geom, state.object, n.vec());

  RollerFinger f1, f2;
  f1.contact_point = support_point(geom, state.object, n.vec(), finger_nominal(s, state.gripper, 0));
  f2.contact_point = support_point(geom, state.object, -n.vec(), finger_nominal(s, state.gripper, 1));
  f1.pivot_angle = step.pivots[0];
  f2.pivot_angle = step.pivots[1];
  f1.brake = step.brakes[0];
  f2.brake = step.brakes[1];
  for (RollerFinger* f : {&f1, &f2}) {
    f->mu_braked = s.grasp.mu_braked;
    f->mu_unbraked = s.grasp.mu_unbraked;
  }
  return AntipodalGrasp(f1, f2, n, ref);
}

ContactSet touching_contacts(const Scenario& s, const SimState& state) {
  ContactSet set;
  for (std::size_t i = 0; i < s.environment.size(); ++i) {
    const Surface& surf = s.environment[i];
    const Vec3& n = surf.normal.vec();
    const Vec3 p = support_point(s.object.geometry, state.object, -n, state.object.position);
    if ((p - surf.point).dot(n) > kContactGapTolerance) continue;
    set.contacts.push_back(EnvContact{p, surf.normal, surf.mu, surf.friction_mode});
    set.surface_index.push_back(i);
  }
  return set;
}

Twist ee_twist_at_origin(const EeMotion& ee, const Pose& gripper) {
  // v_origin - p x w = v_p  =>  v_origin = v_p + p x w
  return Twist(ee.angular, ee.origin_velocity + gripper.position.cross(ee.angular), Frame::Stationary);
}

MotionProblem build_problem(const Scenario& s, const SimState& state, const Step& step) {
  ContactSet touching = touching_contacts(s, state);
  return MotionProblem{current_grasp(s, state, step), world_geometry(s.object.geometry, state.object),
                       std::move(touching.contacts), ee_twist_at_origin(step.ee, state.gripper)};
}

void validate_scenario(const Scenario& s) {
  if (s.steps.empty()) throw SchemaError("steps: at least one step is required");
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const Step& st = s.steps[i];
    const std::string where = "steps[" + std::to_string(i) + "]";
    if (!(st.duration > 0.0) || !std::isfinite(st.duration)) throw SchemaError(where + ".duration: must be positive");
    if (!(st.dt > 0.0) || !std::isfinite(st.dt)) throw SchemaError(where + ".dt: must be positive");
    if (st.dt > st.duration) throw SchemaError(where + ".dt: exceeds the step duration");
    if (!std::isfinite(st.pivots[0]) || !std::isfinite(st.pivots[1])) throw SchemaError(where + ".pivots: not finite");
    if (!st.ee.angular.allFinite() || !st.ee.origin_velocity.allFinite()) {
      throw SchemaError(where + ".ee_twist: not finite");
    }
  }
  try {
    validate_geometry(s.object.geometry);
  } catch (const Error& e) {
    throw SchemaError(std::string("object: ") + e.what());
  }
  if (std::holds_alternative<GeneralCurved>(s.object.geometry)) {
    throw SchemaError("object.shape: curved objects are not supported by the simulator");
  }

  const SimState state = initial_state(s);
  const Step& first = s.steps.front();
  try {
    const AntipodalGrasp grasp = current_grasp(s, state, first);
    for (int i = 0; i < 2; ++i) {
      const double miss = (grasp.finger(i + 1).contact_point - finger_nominal(s, state.gripper, i)).norm();
      if (miss > kContactGapTolerance) {
        throw SchemaError("grasp.contacts[" + std::to_string(i) + "]: not on the object surface (off by " +
                          std::to_string(miss) + " m)");
      }
    }
  } catch (const GraspError& e) {
    throw SchemaError(std::string("grasp: ") + e.what());
  }
  for (std::size_t i = 0; i < s.environment.size(); ++i) {
    if (surface_gap(s.object.geometry, state.object, s.environment[i]) < -kContactGapTolerance) {
      throw SchemaError("environment[" + std::to_string(i) + "]: object penetrates the surface");
    }
    if (!(s.environment[i].mu >= 0.0)) throw SchemaError("environment[" + std::to_string(i) + "].mu: negative");
  }
}

SimState initial_state(const Scenario& s) {
  SimState state;
  state.object = s.object.initial;
  state.gripper = s.grasp.ee_initial;
  return state;
}

namespace {

TrajectoryRecord make_record(const SimState& state, const MotionSolution& sol, const ContactSet& touching,
                             const Twist& object_twist) {
  TrajectoryRecord rec;
  rec.time = state.time;
  rec.object = state.object;
  rec.gripper = state.gripper;
  rec.status = sol.status;
  rec.object_twist = object_twist;
  rec.object_velocity = point_velocity(object_twist, state.object.position);
  for (std::size_t k = 0; k < touching.surface_index.size(); ++k) {
    bool dropped = false;
    for (std::size_t d : sol.dropped) dropped = dropped || d == k;
    if (!dropped && sol.status != SolveStatus::Jammed) rec.active_contacts.push_back(touching.surface_index[k]);
  }
  return rec;
}

struct Solved {
  MotionSolution solution;
  ContactSet touching;
  Twist object_twist;
  Twist ee_twist;
};

Solved solve_at(const Scenario& s, const SimState& state, const Step& step) {
  ContactSet touching = touching_contacts(s, state);
  MotionProblem problem{current_grasp(s, state, step), world_geometry(s.object.geometry, state.object),
                        touching.contacts, ee_twist_at_origin(step.ee, state.gripper)};
  MotionSolution sol = solve_object_motion(problem);
  Solved out{sol, std::move(touching), sol.object_twist_world, problem.ee_twist};
  if (sol.status == SolveStatus::Jammed) {
    // Gripper stalls against the jam; nothing moves.
    out.object_twist = Twist::zero(Frame::Stationary);
    out.ee_twist = Twist::zero(Frame::Stationary);
  }
  return out;
}

Pose advance(const Pose& pose, const Twist& twist, double dt) {
  Pose next;
  next.position = pose.position + point_velocity(twist, pose.position) * dt;
  const Eigen::Quaterniond dq(exp_so3(twist.angular * dt));
  next.orientation = (dq * pose.orientation).normalized();
  return next;
}

}  // namespace

TrajectoryRecord evaluate(const Scenario& s, const SimState& state, const Step& step) {
  const Solved solved = solve_at(s, state, step);
  return make_record(state, solved.solution, solved.touching, solved.object_twist);
}

StepResult step_integrate(const Scenario& s, const SimState& state, const Step& step, double dt) {
  if (!(dt > 0.0)) throw ContractViolation("integration step must be positive");
  const Solved solved = solve_at(s, state, step);

  StepResult out;
  out.record = make_record(state, solved.solution, solved.touching, solved.object_twist);
  out.next.time = state.time + dt;
  out.next.object = advance(state.object, solved.object_twist, dt);
  out.next.gripper = advance(state.gripper, solved.ee_twist, dt);

  // First-order drift into a supporting surface is pushed back out along its normal.
  for (const Surface& surf : s.environment) {
    const double gap = surface_gap(s.object.geometry, out.next.object, surf);
    if (gap < 0.0 && gap > -10.0 * kContactGapTolerance) out.next.object.position -= gap * surf.normal.vec();
  }
  return out;
}

std::vector<TrajectoryRecord> run_scenario(const Scenario& s) {
  validate_scenario(s);
  std::vector<TrajectoryRecord> records;
  SimState state = initial_state(s);
  double step_start = 0.0;
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const Step& step = s.steps[i];
    const auto substeps = static_cast<long>(std::ceil(step.duration / step.dt - 1e-9));
    try {
      for (long k = 0; k < substeps; ++k) {
        const double h = k + 1 < substeps ? step.dt : step.duration - static_cast<double>(k) * step.dt;
        StepResult r = step_integrate(s, state, step, h);
        records.push_back(std::move(r.record));
        state = r.next;
        state.time = step_start + std::min(static_cast<double>(k + 1) * step.dt, step.duration);
      }
    } catch (const SimulationError&) {
      throw;
    } catch (const Error& e) {
      throw SimulationError(i, e.what());
    }
    step_start += step.duration;
    state.time = step_start;
  }
  try {
    records.push_back(evaluate(s, state, s.steps.back()));
  } catch (const Error& e) {
    throw SimulationError(s.steps.size() - 1, e.what());
  }
  return records;
}

}  // namespace rollergrasp
