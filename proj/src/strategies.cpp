#include "rollergrasp/strategies.hpp"

#include <cmath>
#include <numbers>

namespace rollergrasp {

Vec3 planar_drag_velocity(double theta, double nu_ee, const UnitVec3& grasp_normal, const UnitVec3& surface_normal) {
  if (!std::isfinite(theta) || !std::isfinite(nu_ee)) throw ContractViolation("drag inputs must be finite");
  if (std::abs(std::sin(theta)) < 1e-9) {
    throw KinematicJam("kinematic jam: rolling direction in surface plane");
  }
  const Vec3& ne = surface_normal.vec();
  const Vec3 axis = rodrigues_rotate(grasp_normal, theta, ne);
  const Vec3 tangent = axis.cross(grasp_normal.vec());
  const double along_normal = ne.dot(tangent);
  const Vec3 in_plane = tangent - along_normal * ne;
  return -(nu_ee / along_normal) * in_plane;
}

double cylinder_twirl_rate(double theta, double radius, double nu_ee) {
  if (!(radius > 0.0)) throw ContractViolation("cylinder radius must be positive");
  if (!std::isfinite(theta) || !std::isfinite(nu_ee)) throw ContractViolation("twirl inputs must be finite");
  if (std::abs(std::cos(theta)) < 1e-12) return 0.0;
  const double t = std::tan(theta);
  if (std::abs(t) < 1e-9) throw KinematicJam("kinematic jam: roller axes aligned with the surface normal");
  return nu_ee / (radius * t);
}

void validate(const PickPlaceLoads& l) {
  const auto non_negative = [](double x) { return x >= 0.0 && std::isfinite(x); };
  if (!non_negative(l.f_obj) || !non_negative(l.f_normal) || !non_negative(l.mu_roller) || !non_negative(l.mu_env)) {
    throw ContractViolation("pick-place loads and coefficients must be finite and non-negative");
  }
  if (!(l.f_grip > 0.0) || !std::isfinite(l.f_grip)) throw ContractViolation("gripping force must be positive");
}

double pick_upper_bound(const PickPlaceLoads& loads) {
  validate(loads);
  if (!(loads.f_obj > 0.0)) throw ContractViolation("object weight must be positive");
  const double ratio = loads.mu_roller * loads.f_grip / loads.f_obj;
  if (ratio >= 1.0) return std::numbers::pi / 2.0;
  return std::asin(ratio);
}

double place_lower_bound(const PickPlaceLoads& loads) {
  validate(loads);
  if (!(loads.f_normal > 2.0 * loads.f_obj)) {
    throw InfeasibleLoads("infeasible: normal force below 2x weight");
  }
  return std::atan(loads.mu_env / (1.0 - 2.0 * loads.f_obj / loads.f_normal));
}

bool pick_holds(double theta, const PickPlaceLoads& l) {
  return l.f_obj * std::sin(theta) < l.mu_roller * l.f_grip;
}

bool place_slides(double theta, const PickPlaceLoads& l) {
  if (!(l.f_normal > 0.0)) return false;
  return std::tan(theta) * (1.0 - 2.0 * l.f_obj / l.f_normal) > l.mu_env && l.f_normal > 2.0 * l.f_obj;
}

AngleWindow pick_place_window(const PickPlaceLoads& loads) {
  AngleWindow w;
  try {
    w.upper = pick_upper_bound(loads);
    w.lower = place_lower_bound(loads);
  } catch (const Error& e) {
    w.feasible = false;
    w.reason = e.what();
    return w;
  }
  w.feasible = w.lower < w.upper;
  if (!w.feasible) w.reason = "infeasible: place lower bound exceeds pick upper bound";
  return w;
}

MotionSolution asymmetric_roll_step(const AntipodalGrasp& grasp, const Cylinder& cylinder, const EnvContact& table,
                                    double vertical_speed) {
  if (table.friction_mode != FrictionMode::NoSlip) {
    throw ContractViolation("asymmetric roll requires a no-slip table contact");
  }
  const Vec3& ne = table.normal.vec();
  const Twist drive(Vec3::Zero(), vertical_speed * ne, Frame::Stationary);
  MotionProblem problem{grasp, cylinder, {table}, drive};
  if (!grasp.any_braked()) return solve_object_motion(problem);

  const Vec3 n = grasp.grasp_normal().vec();
  const Vec3 follow_dir = (n - n.dot(ne) * ne).normalized();
  const Twist follow(Vec3::Zero(), follow_dir, Frame::Stationary);

  // Unknowns [alpha; h]: rows * basis * alpha - h * b_follow = b_drive.
  const auto basis = admissible_basis(grasp, cylinder);
  std::vector<ConstraintRow> drive_rows{env_constraint_row(table, drive)};
  std::vector<ConstraintRow> follow_rows{env_constraint_row(table, follow)};
  for (const auto& r : env_tangent_rows(table, drive)) drive_rows.push_back(r);
  for (const auto& r : env_tangent_rows(table, follow)) follow_rows.push_back(r);

  const Eigen::Index k = basis.cols();
  Eigen::MatrixXd a(3, k + 1);
  Eigen::VectorXd b(3);
  for (Eigen::Index i = 0; i < 3; ++i) {
    a.row(i).head(k) = drive_rows[i].row * basis;
    a(i, k) = -follow_rows[i].rhs;
    b[i] = drive_rows[i].rhs;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankTolerance);
  const Eigen::VectorXd x = svd.solve(b);
  const double residual = (a * x - b).norm();
  if (residual <= kJamRelativeThreshold * b.norm() + kJamAbsoluteFloor) {
    problem.ee_twist = drive + follow * x[k];
  }
  return solve_object_motion(problem);
}

}  // namespace rollergrasp
