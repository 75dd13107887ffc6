#include "rollergrasp/batch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace rollergrasp {

namespace {

Eigen::Matrix<double, 6, Eigen::Dynamic> orthonormal_columns(const Eigen::Matrix<double, 6, Eigen::Dynamic>& m) {
  Eigen::HouseholderQR<Eigen::Matrix<double, 6, Eigen::Dynamic>> qr(m);
  return qr.householderQ() * Eigen::Matrix<double, 6, Eigen::Dynamic>::Identity(6, m.cols());
}

Eigen::Matrix<double, 6, Eigen::Dynamic> as_columns(const std::vector<Twist>& twists) {
  Eigen::Matrix<double, 6, Eigen::Dynamic> m(6, static_cast<Eigen::Index>(twists.size()));
  for (std::size_t i = 0; i < twists.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = twists[i].as_vector();
  return m;
}

template <typename In, typename Out, typename F>
std::vector<Outcome<Out>> map_catching(const std::vector<In>& in, F&& f, bool parallel) {
  std::vector<Outcome<Out>> out(in.size());
  const auto n = static_cast<std::ptrdiff_t>(in.size());
  const auto body = [&](std::ptrdiff_t i) {
    try {
      out[i].value = f(in[i]);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) body(i);
  }
  return out;
}

}  // namespace

double max_principal_angle(const Eigen::Matrix<double, 6, Eigen::Dynamic>& a,
                           const Eigen::Matrix<double, 6, Eigen::Dynamic>& b) {
  if (a.cols() != b.cols()) throw ContractViolation("principal angles need bases of equal dimension");
  if (a.cols() == 0) return 0.0;
  const auto qa = orthonormal_columns(a);
  const auto qb = orthonormal_columns(b);
  // sin of the angles: singular values of the part of qa outside span(qb).
  const Eigen::MatrixXd outside = qa - qb * (qb.transpose() * qa);
  const double s = Eigen::JacobiSVD<Eigen::MatrixXd>(outside).singularValues().maxCoeff();
  return std::asin(std::min(1.0, s));
}

GraspAnalysis analyze_grasp(const AntipodalGrasp& grasp) {
  const ConstraintMatrix m = build_constraint_matrix(grasp);
  const std::vector<Twist> kernel = numeric_null_space(m, kRankTolerance);
  GraspAnalysis a;
  a.rank = m.rank;
  a.null_dim = static_cast<int>(kernel.size());

  const auto [s1, s2] = analytic_free_screws(grasp);
  Eigen::Matrix<double, 6, Eigen::Dynamic> analytic(6, 2);
  analytic.col(0) = twist_from_screw(s1, 1.0).as_vector();
  analytic.col(1) = twist_from_screw(s2, 1.0).as_vector();
  const double m_norm = m.rows.norm();
  for (Eigen::Index c = 0; c < 2; ++c) {
    a.analytic_residual =
        std::max(a.analytic_residual, (m.rows * analytic.col(c)).norm() / (m_norm * analytic.col(c).norm()));
  }
  if (a.null_dim == 2) a.max_principal_angle = max_principal_angle(analytic, as_columns(kernel));
  return a;
}

std::vector<AntipodalGrasp> random_generic_grasps(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-0.2, 0.2);
  std::uniform_real_distribution<double> gap(0.01, 0.15);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::normal_distribution<double> gauss;
  const auto random_unit = [&] {
    Vec3 v;
    do {
      v = Vec3(gauss(rng), gauss(rng), gauss(rng));
    } while (v.norm() < 1e-3);
    return UnitVec3::normalized(v);
  };

  std::vector<AntipodalGrasp> out;
  out.reserve(count);
  while (out.size() < count) {
    const UnitVec3 n = random_unit();
    Vec3 r = random_unit().vec();
    r -= r.dot(n.vec()) * n.vec();
    if (r.norm() < 1e-3) continue;
    const UnitVec3 ref = UnitVec3::normalized(r);
    const double theta1 = angle(rng);
    const double theta2 = angle(rng);
    // Generic: axes well away from parallel and antiparallel.
    const double d = std::abs(wrap_angle(theta1 - theta2));
    if (d < 0.05 || std::numbers::pi - d < 0.05) continue;

    const Vec3 q(pos(rng), pos(rng), pos(rng));
    const double half_gap = 0.5 * gap(rng);
    RollerFinger f1, f2;
    f1.contact_point = q + half_gap * n.vec();
    f2.contact_point = q - half_gap * n.vec();
    f1.pivot_angle = wrap_angle(theta1);
    f2.pivot_angle = wrap_angle(theta2);
    out.emplace_back(f1, f2, n, ref);
  }
  return out;
}

std::vector<GraspAnalysis> analyze_grasps(const std::vector<AntipodalGrasp>& grasps) {
  std::vector<GraspAnalysis> out(grasps.size());
  const auto n = static_cast<std::ptrdiff_t>(grasps.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = analyze_grasp(grasps[i]);
  return out;
}

std::vector<GraspAnalysis> analyze_grasps_serial(const std::vector<AntipodalGrasp>& grasps) {
  std::vector<GraspAnalysis> out;
  out.reserve(grasps.size());
  for (const auto& g : grasps) out.push_back(analyze_grasp(g));
  return out;
}

std::vector<Outcome<MotionSolution>> solve_batch(const std::vector<MotionProblem>& problems) {
  return map_catching<MotionProblem, MotionSolution>(problems, solve_object_motion, true);
}

std::vector<Outcome<MotionSolution>> solve_batch_serial(const std::vector<MotionProblem>& problems) {
  return map_catching<MotionProblem, MotionSolution>(problems, solve_object_motion, false);
}

std::vector<Outcome<Trajectory>> run_scenarios(const std::vector<Scenario>& scenarios) {
  return map_catching<Scenario, Trajectory>(scenarios, run_scenario, true);
}

std::vector<Outcome<Trajectory>> run_scenarios_serial(const std::vector<Scenario>& scenarios) {
  return map_catching<Scenario, Trajectory>(scenarios, run_scenario, false);
}

}  // namespace rollergrasp
