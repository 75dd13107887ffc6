#include "rollergrasp/contact.hpp"

#include <cmath>

namespace rollergrasp {

const char* to_string(FrictionMode m) { return m == FrictionMode::NoSlip ? "no-slip" : "normal-only"; }

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Unique: return "unique";
    case SolveStatus::Underdetermined: return "underdetermined";
    case SolveStatus::Jammed: return "jammed";
    case SolveStatus::InactiveContact: return "inactive_contact";
  }
  return "?";
}

double approach_speed(const EnvContact& c, const Twist& ee) {
  return point_velocity(ee, c.point).dot(c.normal.vec());
}

ConstraintRow env_constraint_row(const EnvContact& c, const Twist& ee) {
  return {point_direction_row(c.point, c.normal.vec()), -approach_speed(c, ee)};
}

std::array<ConstraintRow, 2> env_tangent_rows(const EnvContact& c, const Twist& ee) {
  const Vec3& n = c.normal.vec();
  // Any orthonormal tangent pair; pick the seed axis least aligned with n.
  Eigen::Index seed = 0;
  n.cwiseAbs().minCoeff(&seed);
  const Vec3 t1 = n.cross(Vec3::Unit(seed)).normalized();
  const Vec3 t2 = n.cross(t1);
  const Vec3 vee = point_velocity(ee, c.point);
  return {ConstraintRow{point_direction_row(c.point, t1), -vee.dot(t1)},
          ConstraintRow{point_direction_row(c.point, t2), -vee.dot(t2)}};
}

Eigen::Matrix<double, 3, 6> braked_contact_rows(const RollerFinger& finger, const AntipodalGrasp&) {
  if (finger.brake != BrakeState::Braked) {
    throw ContractViolation("braked_contact_rows: finger is unbraked, use its rolling row");
  }
  Eigen::Matrix<double, 3, 6> rows;
  for (int k = 0; k < 3; ++k) rows.row(k) = point_direction_row(finger.contact_point, Vec3::Unit(k));
  return rows;
}

Eigen::Matrix<double, Eigen::Dynamic, 6> grasp_rows(const AntipodalGrasp& grasp) {
  const ConstraintMatrix m = build_constraint_matrix(grasp);
  Eigen::Matrix<double, Eigen::Dynamic, 6> rows(8, 6);
  int n = 0;
  for (int i = 1; i <= 2; ++i) {
    const RollerFinger& f = grasp.finger(i);
    if (f.brake == BrakeState::Braked) {
      rows.middleRows<3>(n) = braked_contact_rows(f, grasp);
      n += 3;
    } else {
      rows.row(n++) = m.rows.row(i - 1);
    }
  }
  rows.row(n++) = m.rows.row(ConstraintMatrix::kLine);
  rows.row(n++) = m.rows.row(ConstraintMatrix::kSpin);
  rows.conservativeResize(n, 6);
  return rows;
}

Eigen::Matrix<double, 6, Eigen::Dynamic> admissible_basis(const AntipodalGrasp& grasp, const ObjectGeometry& geom) {
  std::vector<Vec6> cols;
  if (grasp.any_braked()) {
    for (const Twist& t : numeric_null_space(grasp_rows(grasp), kRankTolerance)) cols.push_back(t.as_vector());
  } else {
    for (const Screw& s : geometry_admissible_motions(grasp, geom).screws) {
      cols.push_back(twist_from_screw(s, 1.0).as_vector());
    }
  }
  Eigen::Matrix<double, 6, Eigen::Dynamic> basis(6, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) basis.col(static_cast<Eigen::Index>(i)) = cols[i];
  return basis;
}

namespace {

struct EnvSystem {
  Eigen::Matrix<double, Eigen::Dynamic, 6> rows;
  Eigen::VectorXd rhs;
};

EnvSystem env_system(const std::vector<EnvContact>& contacts, const std::vector<std::size_t>& active,
                     const Twist& ee) {
  std::vector<ConstraintRow> rows;
  for (std::size_t i : active) {
    const EnvContact& c = contacts[i];
    rows.push_back(env_constraint_row(c, ee));
    if (c.friction_mode == FrictionMode::NoSlip) {
      for (const ConstraintRow& r : env_tangent_rows(c, ee)) rows.push_back(r);
    }
  }
  EnvSystem sys{Eigen::Matrix<double, Eigen::Dynamic, 6>(rows.size(), 6), Eigen::VectorXd(rows.size())};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sys.rows.row(static_cast<Eigen::Index>(i)) = rows[i].row;
    sys.rhs[static_cast<Eigen::Index>(i)] = rows[i].rhs;
  }
  return sys;
}

// Rank with the cutoff scaled by the operands rather than by the largest
// singular value, so a product that vanishes up to round-off has rank zero.
int scaled_rank(Eigen::JacobiSVD<Eigen::MatrixXd>& svd, double scale) {
  const double top = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
  const double cutoff = kRankTolerance * scale;
  if (!(top > cutoff)) return 0;
  svd.setThreshold(cutoff / top);
  return static_cast<int>(svd.rank());
}

struct Reduced {
  Eigen::VectorXd alpha;
  int rank = 0;
  double residual = 0.0;
  bool consistent = true;
};

// Minimum-norm least-squares solve of (rows * basis) alpha = rhs.
Reduced solve_reduced(const Eigen::Matrix<double, 6, Eigen::Dynamic>& basis, const EnvSystem& sys) {
  Reduced out;
  const Eigen::Index k = basis.cols();
  out.alpha = Eigen::VectorXd::Zero(k);
  if (sys.rows.rows() == 0) return out;
  const double rhs_norm = sys.rhs.norm();
  if (k > 0) {
    const Eigen::MatrixXd a = sys.rows * basis;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.rank = scaled_rank(svd, sys.rows.norm() * basis.norm());
    if (out.rank > 0) out.alpha = svd.solve(sys.rhs);
    out.residual = (a * out.alpha - sys.rhs).norm();
  } else {
    out.residual = rhs_norm;
  }
  out.consistent = out.residual <= kJamRelativeThreshold * rhs_norm + kJamAbsoluteFloor;
  return out;
}

// Column twists from an SVD basis carry round-off in a vanishing angular part.
Screw screw_of_column(const Vec6& xi) {
  Vec6 clean = xi;
  if (clean.head<3>().norm() <= 1e-12 * clean.norm()) clean.head<3>().setZero();
  return screw_from_twist(Twist::from_vector(clean, Frame::EndEffectorRelative));
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

MotionSolution solve_object_motion(const MotionProblem& p) {
  if (p.ee_twist.frame != Frame::Stationary) throw ContractViolation("ee twist must be in the stationary frame");
  const auto basis = admissible_basis(p.grasp, p.geometry);

  std::vector<std::size_t> active = all_indices(p.contacts.size());
  std::vector<std::size_t> dropped;
  Reduced red = solve_reduced(basis, env_system(p.contacts, active, p.ee_twist));

  if (!red.consistent) {
    std::vector<std::size_t> kept;
    for (std::size_t i : active) {
      if (approach_speed(p.contacts[i], p.ee_twist) > kSeparationTolerance) {
        dropped.push_back(i);
      } else {
        kept.push_back(i);
      }
    }
    if (!dropped.empty()) {
      Reduced retry = solve_reduced(basis, env_system(p.contacts, kept, p.ee_twist));
      if (retry.consistent) {
        red = retry;
        active = kept;
      }
    }
  }

  MotionSolution sol;
  sol.ee_twist = p.ee_twist;
  if (!red.consistent) {
    sol.status = SolveStatus::Jammed;
    sol.residual = red.residual;
    sol.dropped.clear();
    return sol;
  }

  const Vec6 rel = basis * red.alpha;
  sol.object_twist_rel = Twist::from_vector(rel, Frame::EndEffectorRelative);
  sol.object_twist_world = compose_relative(sol.object_twist_rel, p.ee_twist);

  // A dropped contact must not be penetrated by the reduced solution.
  for (std::size_t i : dropped) {
    const EnvContact& c = p.contacts[i];
    const double vn = point_velocity(sol.object_twist_world, c.point).dot(c.normal.vec());
    if (vn < -kJamRelativeThreshold * std::abs(approach_speed(c, p.ee_twist)) - kJamAbsoluteFloor) {
      MotionSolution jam;
      jam.ee_twist = p.ee_twist;
      jam.status = SolveStatus::Jammed;
      jam.residual = std::abs(vn);
      return jam;
    }
  }

  sol.free_dims = static_cast<int>(basis.cols()) - red.rank;
  sol.dropped = dropped;
  const double grasp_residual = (grasp_rows(p.grasp) * rel).norm();
  sol.residual = std::hypot(red.residual, grasp_residual);
  if (sol.free_dims > 0) {
    sol.status = SolveStatus::Underdetermined;
  } else if (!dropped.empty()) {
    sol.status = SolveStatus::InactiveContact;
  } else {
    sol.status = SolveStatus::Unique;
  }
  return sol;
}

MobilityReport classify_mobility(const MotionProblem& p) {
  if (!p.ee_twist.is_zero()) throw ContractViolation("classify_mobility requires a zero ee twist");
  MobilityReport report;
  report.active_contacts = all_indices(p.contacts.size());

  MobilityClass geometric;
  Eigen::Matrix<double, 6, Eigen::Dynamic> basis = admissible_basis(p.grasp, p.geometry);
  if (!p.grasp.any_braked()) geometric = geometry_admissible_motions(p.grasp, p.geometry);

  const EnvSystem sys = env_system(p.contacts, report.active_contacts, p.ee_twist);
  bool reduced = false;
  if (basis.cols() > 0 && sys.rows.rows() > 0) {
    const Eigen::MatrixXd a = sys.rows * basis;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const int rank = scaled_rank(svd, sys.rows.norm() * basis.norm());
    if (rank > 0) {
      reduced = true;
      const Eigen::MatrixXd kernel = svd.matrixV().rightCols(basis.cols() - rank);
      basis = basis * kernel;
    }
  }

  report.free_dims = static_cast<int>(basis.cols());
  if (!reduced && !p.grasp.any_braked()) {
    report.free_screws = geometric.screws;
    report.spherical = geometric.spherical;
  } else {
    for (Eigen::Index c = 0; c < basis.cols(); ++c) {
      report.free_screws.push_back(screw_of_column(basis.col(c)));
    }
  }

  switch (report.free_dims) {
    case 0: report.kind = MobilityKind::Fixed; break;
    case 1:
      report.kind = report.free_screws.front().is_translation() ? MobilityKind::TranslationOnly : MobilityKind::OneDof;
      break;
    default: report.kind = MobilityKind::TwoDof; break;
  }
  return report;
}

}  // namespace rollergrasp
