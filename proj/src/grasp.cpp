#include "rollergrasp/grasp.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rollergrasp {

const char* to_string(BrakeState b) { return b == BrakeState::Braked ? "braked" : "unbraked"; }

const char* to_string(MobilityKind k) {
  switch (k) {
    case MobilityKind::TwoDof: return "two-dof";
    case MobilityKind::OneDof: return "one-dof";
    case MobilityKind::Fixed: return "fixed";
    case MobilityKind::TranslationOnly: return "translation-only";
  }
  return "?";
}

double wrap_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double a = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (a <= -std::numbers::pi) a += kTwoPi;
  return a;
}

namespace {

// Sign-agnostic angle between two lines.
double line_angle(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), std::abs(a.dot(b)));
}

void validate_finger(const RollerFinger& f, int index) {
  const std::string who = "finger" + std::to_string(index);
  if (!f.contact_point.allFinite()) throw GraspError("not antipodal: " + who + " contact point is not finite");
  if (!std::isfinite(f.pivot_angle)) throw GraspError(who + ": pivot angle is not finite");
  if (!(f.mu_braked >= 0.0) || !(f.mu_unbraked >= 0.0)) {
    throw GraspError(who + ": friction coefficients must be non-negative");
  }
  if (f.mu_unbraked > f.mu_braked) throw GraspError(who + ": mu_unbraked exceeds mu_braked");
}

}  // namespace

AntipodalGrasp::AntipodalGrasp(RollerFinger finger1, RollerFinger finger2, const UnitVec3& grasp_normal,
                               const UnitVec3& reference_normal)
    : fingers_{std::move(finger1), std::move(finger2)},
      normal_(grasp_normal),
      reference_(reference_normal),
      axes_{UnitVec3::z(), UnitVec3::z()} {
  validate_finger(fingers_[0], 1);
  validate_finger(fingers_[1], 2);
  for (auto& f : fingers_) f.pivot_angle = wrap_angle(f.pivot_angle);

  const Vec3 gap = fingers_[0].contact_point - fingers_[1].contact_point;
  const double gap_norm = gap.norm();
  if (gap_norm == 0.0) throw GraspError("not antipodal: contact points coincide");
  const Vec3 gap_dir = gap / gap_norm;
  if (gap_dir.cross(normal_.vec()).norm() > kUnitTolerance) {
    throw GraspError("not antipodal: p1 - p2 is not parallel to the grasp normal");
  }
  if (gap_dir.dot(normal_.vec()) < 0.0) {
    throw GraspError("not antipodal: grasp normal must point from finger2 toward finger1");
  }
  if (std::abs(reference_.vec().dot(normal_.vec())) > kUnitTolerance) {
    throw GraspError("not antipodal: reference normal is not perpendicular to the grasp normal");
  }
  axes_[0] = roller_axis(*this, 1);
  axes_[1] = roller_axis(*this, 2);
}

const RollerFinger& AntipodalGrasp::finger(int index) const {
  if (index != 1 && index != 2) throw ContractViolation("finger index must be 1 or 2");
  return fingers_[index - 1];
}

const UnitVec3& AntipodalGrasp::axis(int index) const {
  if (index != 1 && index != 2) throw ContractViolation("finger index must be 1 or 2");
  return axes_[index - 1];
}

Vec3 AntipodalGrasp::midpoint() const {
  return 0.5 * (fingers_[0].contact_point + fingers_[1].contact_point);
}

bool AntipodalGrasp::any_braked() const {
  return fingers_[0].brake == BrakeState::Braked || fingers_[1].brake == BrakeState::Braked;
}

AntipodalGrasp AntipodalGrasp::with_pivots(double theta1, double theta2) const {
  RollerFinger f1 = fingers_[0];
  RollerFinger f2 = fingers_[1];
  f1.pivot_angle = theta1;
  f2.pivot_angle = theta2;
  return AntipodalGrasp(f1, f2, normal_, reference_);
}

AntipodalGrasp AntipodalGrasp::with_brakes(BrakeState b1, BrakeState b2) const {
  RollerFinger f1 = fingers_[0];
  RollerFinger f2 = fingers_[1];
  f1.brake = b1;
  f2.brake = b2;
  return AntipodalGrasp(f1, f2, normal_, reference_);
}

UnitVec3 roller_axis(const AntipodalGrasp& grasp, int finger_index) {
  const double theta = grasp.finger(finger_index).pivot_angle;
  return UnitVec3::normalized(rodrigues_rotate(grasp.grasp_normal(), theta, grasp.reference_normal().vec()));
}

Eigen::Matrix<double, 1, 6> point_direction_row(const Vec3& p, const Vec3& d) {
  Eigen::Matrix<double, 1, 6> row;
  row << p.cross(d).transpose(), d.transpose();
  return row;
}

ConstraintMatrix build_constraint_matrix(const AntipodalGrasp& grasp) {
  const Vec3& n = grasp.grasp_normal().vec();
  ConstraintMatrix m;
  m.rows.row(ConstraintMatrix::kRoll1) = point_direction_row(grasp.finger(1).contact_point, grasp.axis(1).vec());
  m.rows.row(ConstraintMatrix::kRoll2) = point_direction_row(grasp.finger(2).contact_point, grasp.axis(2).vec());
  m.rows.row(ConstraintMatrix::kLine) = point_direction_row(grasp.midpoint(), n);
  m.rows.row(ConstraintMatrix::kSpin) << n.transpose(), 0.0, 0.0, 0.0;

  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 6>> svd(m.rows);
  const auto& sv = svd.singularValues();
  m.rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > kRankTolerance * sv[0]) ++m.rank;
  }
  return m;
}

std::vector<Twist> numeric_null_space(const Eigen::Matrix<double, Eigen::Dynamic, 6>& m, double tol) {
  if (!(tol > 0.0)) throw ContractViolation("null-space tolerance must be positive");
  std::vector<Twist> basis;
  if (m.rows() == 0) {
    for (int i = 0; i < 6; ++i) basis.push_back(Twist::from_vector(Vec6::Unit(i), Frame::EndEffectorRelative));
    return basis;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? tol * sv[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) ++rank;
  }
  const Eigen::MatrixXd& v = svd.matrixV();
  for (int c = rank; c < 6; ++c) {
    basis.push_back(Twist::from_vector(v.col(c), Frame::EndEffectorRelative));
  }
  return basis;
}

std::vector<Twist> numeric_null_space(const ConstraintMatrix& m, double tol) {
  return numeric_null_space(Eigen::Matrix<double, Eigen::Dynamic, 6>(m.rows), tol);
}

namespace {

// Axis 2 flipped into the hemisphere of axis 1; roller axes are lines.
Vec3 aligned_axis2(const AntipodalGrasp& grasp) {
  const Vec3& w1 = grasp.axis(1).vec();
  const Vec3& w2 = grasp.axis(2).vec();
  return (w1 + w2).norm() < kParallelAxisThreshold ? Vec3(-w2) : w2;
}

// Pitch that puts the screw through q with direction dir into the kernel of row roll1.
double kernel_pitch(const AntipodalGrasp& grasp, const Vec3& dir, const Vec3& q) {
  const Vec3& w1 = grasp.axis(1).vec();
  const Vec3& p1 = grasp.finger(1).contact_point;
  const double rhs = p1.cross(w1).dot(dir) - w1.dot(dir.cross(q));
  return -rhs / w1.dot(dir);
}

}  // namespace

bool axes_parallel(const AntipodalGrasp& grasp) {
  return (grasp.axis(1).vec() - aligned_axis2(grasp)).norm() < kParallelAxisThreshold;
}

std::pair<Screw, Screw> analytic_free_screws(const AntipodalGrasp& grasp) {
  const Vec3& w1 = grasp.axis(1).vec();
  const Vec3 w2 = aligned_axis2(grasp);
  const Vec3 q = grasp.midpoint();
  const UnitVec3 internal = UnitVec3::normalized(w1 + w2);

  if (axes_parallel(grasp)) {
    const UnitVec3 tangent = UnitVec3::normalized(internal.vec().cross(grasp.grasp_normal().vec()));
    return {Screw::rotational(q, internal, 0.0), Screw::translation(tangent)};
  }

  const UnitVec3 external = UnitVec3::normalized(w1 - w2);
  return {Screw::rotational(q, internal, kernel_pitch(grasp, internal.vec(), q)),
          Screw::rotational(q, external, kernel_pitch(grasp, external.vec(), q))};
}

void validate_geometry(const ObjectGeometry& geom) {
  struct Visitor {
    void operator()(const Sphere& s) const {
      if (!(s.radius > 0.0) || !std::isfinite(s.radius)) throw GeometryError("sphere radius must be positive");
    }
    void operator()(const Cylinder& c) const {
      if (!(c.radius > 0.0) || !std::isfinite(c.radius)) throw GeometryError("cylinder radius must be positive");
      if (!(c.half_length >= 0.0)) throw GeometryError("cylinder half length must be non-negative");
    }
    void operator()(const FlatBox& b) const {
      if (!b.half_extents.allFinite() || (b.half_extents.array() < 0.0).any()) {
        throw GeometryError("box half extents must be finite and non-negative");
      }
    }
    void operator()(const GeneralCurved& g) const {
      for (double k : g.curvatures1) {
        if (!std::isfinite(k)) throw GeometryError("curvature must be finite");
      }
      for (double k : g.curvatures2) {
        if (!std::isfinite(k)) throw GeometryError("curvature must be finite");
      }
    }
  };
  std::visit(Visitor{}, geom);
}

const char* geometry_name(const ObjectGeometry& geom) {
  static constexpr const char* kNames[] = {"sphere", "cylinder", "box", "curved"};
  return kNames[geom.index()];
}

namespace {

MobilityClass flat_contact_class(const AntipodalGrasp& grasp, const std::pair<Screw, Screw>& screws) {
  if (axes_parallel(grasp)) return {MobilityKind::TranslationOnly, {screws.second}, false};
  return {MobilityKind::Fixed, {}, false};
}

bool all_zero(const GeneralCurved& g) {
  for (double k : g.curvatures1) {
    if (k != 0.0) return false;
  }
  for (double k : g.curvatures2) {
    if (k != 0.0) return false;
  }
  return true;
}

}  // namespace

MobilityClass geometry_admissible_motions(const AntipodalGrasp& grasp, const ObjectGeometry& geom) {
  validate_geometry(geom);
  const auto screws = analytic_free_screws(grasp);

  if (std::holds_alternative<Sphere>(geom)) {
    return {MobilityKind::TwoDof, {screws.first, screws.second}, true};
  }
  if (const auto* g = std::get_if<GeneralCurved>(&geom)) {
    if (all_zero(*g)) return flat_contact_class(grasp, screws);
    return {MobilityKind::TwoDof, {screws.first, screws.second}, false};
  }
  if (std::holds_alternative<FlatBox>(geom)) return flat_contact_class(grasp, screws);

  const Vec3& axis = std::get<Cylinder>(geom).axis.vec();
  if (line_angle(axis, grasp.grasp_normal().vec()) < kCylinderAlignTolerance) {
    throw GeometryError("invalid cylinder grasp: cylinder axis is parallel to the grasp normal");
  }
  const auto aligned = [&](const Screw& s) {
    return line_angle(s.direction().vec(), axis) < kCylinderAlignTolerance;
  };

  if (axes_parallel(grasp)) {
    if (aligned(screws.first)) return {MobilityKind::TwoDof, {screws.first, screws.second}, false};
    return {MobilityKind::TranslationOnly, {screws.second}, false};
  }
  if (aligned(screws.first)) return {MobilityKind::OneDof, {screws.first}, false};
  if (aligned(screws.second)) return {MobilityKind::OneDof, {screws.second}, false};
  return {MobilityKind::Fixed, {}, false};
}

}  // namespace rollergrasp
