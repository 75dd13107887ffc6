#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"
#include "rollergrasp/batch.hpp"
#include "rollergrasp/grasp.hpp"

using namespace rollergrasp;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

AntipodalGrasp make_grasp(double theta1, double theta2, double half_gap = 0.04) {
  RollerFinger f1, f2;
  f1.contact_point = Vec3(0, half_gap, 0);
  f2.contact_point = Vec3(0, -half_gap, 0);
  f1.pivot_angle = theta1;
  f2.pivot_angle = theta2;
  return AntipodalGrasp(f1, f2, UnitVec3::y(), UnitVec3::z());
}

bool near(const Vec3& a, const Vec3& b, double tol) { return (a - b).norm() <= tol; }

Eigen::Matrix<double, 6, Eigen::Dynamic> columns(const std::vector<Twist>& ts) {
  Eigen::Matrix<double, 6, Eigen::Dynamic> m(6, static_cast<Eigen::Index>(ts.size()));
  for (std::size_t i = 0; i < ts.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = ts[i].as_vector();
  return m;
}

}  // namespace

TEST_CASE("antipodal invariants are enforced") {
  RollerFinger f1, f2;
  f1.contact_point = Vec3(0, 0.04, 0);
  f2.contact_point = Vec3(0, -0.04, 0);
  CHECK_NOTHROW(AntipodalGrasp(f1, f2, UnitVec3::y(), UnitVec3::z()));
  CHECK_THROWS_AS(AntipodalGrasp(f2, f1, UnitVec3::y(), UnitVec3::z()), GraspError);
  CHECK_THROWS_AS(AntipodalGrasp(f1, f2, UnitVec3::x(), UnitVec3::z()), GraspError);
  CHECK_THROWS_AS(AntipodalGrasp(f1, f2, UnitVec3::y(), UnitVec3(0, 0.6, 0.8)), GraspError);
  CHECK_THROWS_AS(AntipodalGrasp(f1, f1, UnitVec3::y(), UnitVec3::z()), GraspError);
  RollerFinger skew = f1;
  skew.contact_point.x() = 1e-6;
  CHECK_THROWS_WITH_AS(AntipodalGrasp(skew, f2, UnitVec3::y(), UnitVec3::z()),
                       doctest::Contains("not antipodal"), GraspError);
  RollerFinger bad_mu = f1;
  bad_mu.mu_unbraked = 0.9;
  CHECK_THROWS_AS(AntipodalGrasp(bad_mu, f2, UnitVec3::y(), UnitVec3::z()), GraspError);
}

TEST_CASE("pivot angles wrap into (-pi, pi]") {
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_angle(0.3) == 0.3);
}

TEST_CASE("roller axis") {
  CHECK(near(roller_axis(make_grasp(0, 0), 1).vec(), Vec3::UnitZ(), 0.0));
  CHECK(near(roller_axis(make_grasp(45 * kDeg, 0), 1).vec(), Vec3(0.70711, 0, 0.70711), 1e-5));
  CHECK(near(roller_axis(make_grasp(90 * kDeg, 0), 1).vec(), Vec3::UnitX(), 1e-15));
  const AntipodalGrasp g = make_grasp(0.3, -1.1);
  CHECK(near(g.axis(2).vec(), roller_axis(g, 2).vec(), 0.0));
  CHECK(std::abs(g.axis(1).vec().dot(g.grasp_normal().vec())) < 1e-15);
}

TEST_CASE("constraint matrix") {
  SUBCASE("parallel vertical rollers") {
    const ConstraintMatrix m = build_constraint_matrix(make_grasp(0, 0));
    Eigen::Matrix<double, 4, 6> expected;
    expected << 0.04, 0, 0, 0, 0, 1, -0.04, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0;
    CHECK((m.rows - expected).norm() < 1e-15);
    CHECK(m.rank == oracle::rref_rank(m.rows));
  }
  SUBCASE("pivots +45 and -45") {
    const ConstraintMatrix m = build_constraint_matrix(make_grasp(45 * kDeg, -45 * kDeg));
    Eigen::Matrix<double, 2, 6> expected;
    expected << 0.028284, 0, -0.028284, 0.70711, 0, 0.70711, -0.028284, 0, -0.028284, -0.70711, 0, 0.70711;
    CHECK((m.rows.topRows<2>() - expected).cwiseAbs().maxCoeff() < 1e-5);
    CHECK(m.rank == 4);
  }
  SUBCASE("spin row has no linear block and rows match hand expansion") {
    oracle::GraspGenerator gen(3);
    for (int i = 0; i < 50; ++i) {
      const auto s = gen.next();
      const ConstraintMatrix m = build_constraint_matrix(s.grasp());
      REQUIRE(m.rows.row(ConstraintMatrix::kSpin).tail<3>().isZero(0.0));
      REQUIRE((m.rows - s.matrix()).norm() < 1e-12);
    }
  }
  CHECK(std::string(ConstraintMatrix::kRowLabels[ConstraintMatrix::kLine]) == "line");
}

TEST_CASE("numeric null space") {
  SUBCASE("parallel rollers: span of z-rotation and x-translation") {
    const ConstraintMatrix m = build_constraint_matrix(make_grasp(0, 0));
    const auto kernel = numeric_null_space(m, kRankTolerance);
    REQUIRE(kernel.size() == 2);
    const Eigen::MatrixXd rref = oracle::rref_null_space(m.rows);
    REQUIRE(rref.cols() == 2);
    Eigen::Matrix<double, 6, 2> expected = Eigen::Matrix<double, 6, 2>::Zero();
    expected(2, 0) = 1.0;
    expected(3, 1) = 1.0;
    CHECK(oracle::span_distance(columns(kernel), expected) < 1e-12);
    CHECK(oracle::span_distance(rref, expected) < 1e-12);
  }
  SUBCASE("zero matrix has a six-dimensional kernel") {
    const auto kernel = numeric_null_space(Eigen::Matrix<double, Eigen::Dynamic, 6>::Zero(4, 6), 1e-10);
    CHECK(kernel.size() == 6);
  }
  SUBCASE("orthonormal and annihilated") {
    oracle::GraspGenerator gen(5);
    const ConstraintMatrix m = build_constraint_matrix(gen.next().grasp());
    const auto k = columns(numeric_null_space(m, kRankTolerance));
    CHECK((k.transpose() * k - Eigen::Matrix2d::Identity()).norm() < 1e-12);
    CHECK((m.rows * k).norm() <= kRankTolerance * m.rows.norm());
  }
  CHECK_THROWS_AS(numeric_null_space(Eigen::Matrix<double, Eigen::Dynamic, 6>::Zero(1, 6), 0.0), ContractViolation);
}

TEST_CASE("analytic free screws") {
  SUBCASE("worked example: pivots +45 / -45, 0.08 m gap") {
    const auto [internal, external] = analytic_free_screws(make_grasp(45 * kDeg, -45 * kDeg));
    CHECK(near(internal.rotation().axis_dir.vec(), Vec3::UnitZ(), 1e-15));
    CHECK(near(internal.rotation().axis_point, Vec3::Zero(), 0.0));
    CHECK(internal.rotation().pitch == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(std::abs(internal.rotation().pitch - 0.04) < 1e-9);
    CHECK(near(external.rotation().axis_dir.vec(), Vec3::UnitX(), 1e-15));
    CHECK(std::abs(external.rotation().pitch + 0.04) < 1e-9);

    // Oracle: the screw twists lie in the Gaussian-elimination kernel.
    const ConstraintMatrix m = build_constraint_matrix(make_grasp(45 * kDeg, -45 * kDeg));
    Eigen::Matrix<double, 6, 2> a;
    a.col(0) = twist_from_screw(internal, 1.0).as_vector();
    a.col(1) = twist_from_screw(external, 1.0).as_vector();
    CHECK(oracle::span_distance(a, oracle::rref_null_space(m.rows)) < 1e-12);
  }
  SUBCASE("parallel vertical rollers") {
    const auto [rotation, translation] = analytic_free_screws(make_grasp(0, 0));
    CHECK(near(rotation.rotation().axis_dir.vec(), Vec3::UnitZ(), 0.0));
    CHECK(rotation.rotation().pitch == 0.0);
    REQUIRE(translation.is_translation());
    CHECK(near(translation.pure_translation().dir.vec(), Vec3(-1, 0, 0), 1e-15));
    CHECK(axes_parallel(make_grasp(0, 0)));
  }
  SUBCASE("antiparallel axes are parallel lines") {
    CHECK(axes_parallel(make_grasp(90 * kDeg, -90 * kDeg)));
    const auto [r, t] = analytic_free_screws(make_grasp(90 * kDeg, -90 * kDeg));
    CHECK(t.is_translation());
  }
  SUBCASE("symmetric pivots put the internal bisector on the reference normal") {
    for (double deg = 1; deg < 90; deg += 7) {
      const auto [internal, external] = analytic_free_screws(make_grasp(deg * kDeg, -deg * kDeg));
      REQUIRE(near(internal.rotation().axis_dir.vec(), Vec3::UnitZ(), 1e-14));
    }
  }
}

TEST_CASE("property: random generic grasps have a two-dimensional kernel spanned by the bisector screws") {
  oracle::GraspGenerator gen(2024);
  for (int i = 0; i < 1000; ++i) {
    const auto s = gen.next();
    const AntipodalGrasp g = s.grasp();
    const ConstraintMatrix m = build_constraint_matrix(g);
    REQUIRE(m.rank == 4);
    REQUIRE(oracle::rref_rank(m.rows) == 4);
    const auto kernel = numeric_null_space(m, kRankTolerance);
    REQUIRE(kernel.size() == 2);

    const auto [a, b] = analytic_free_screws(g);
    Eigen::Matrix<double, 6, 2> screws;
    screws.col(0) = twist_from_screw(a, 1.0).as_vector();
    screws.col(1) = twist_from_screw(b, 1.0).as_vector();
    for (int c = 0; c < 2; ++c) {
      REQUIRE((m.rows * screws.col(c)).norm() <= 1e-9 * m.rows.norm() * screws.col(c).norm());
    }
    REQUIRE(max_principal_angle(screws, columns(kernel)) < 1e-6);
    REQUIRE(oracle::span_distance(screws, oracle::rref_null_space(m.rows)) < 1e-6);

    const Vec3& n = g.grasp_normal().vec();
    const Vec3& di = a.direction().vec();
    const Vec3& de = b.direction().vec();
    REQUIRE(std::abs(di.dot(de)) < 1e-12);
    REQUIRE(std::abs(di.dot(n)) < 1e-12);
    REQUIRE(std::abs(de.dot(n)) < 1e-12);
    REQUIRE(near(a.rotation().axis_point, g.midpoint(), 1e-12));
  }
}

TEST_CASE("property: pivot equivariance") {
  oracle::GraspGenerator gen(77);
  std::uniform_real_distribution<double> delta(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    auto s = gen.next();
    const auto base = build_constraint_matrix(s.grasp()).rows;
    const double d = delta(gen.rng());
    s.theta1 = wrap_angle(s.theta1 + d);
    s.theta2 = wrap_angle(s.theta2 + d);
    s.ref = oracle::rotate(s.n, -d, s.ref);
    REQUIRE((build_constraint_matrix(s.grasp()).rows - base).norm() < 1e-12);
  }
}

TEST_CASE("property: parallel-axis continuity of the internal screw") {
  const double theta = 30 * kDeg;
  const auto [limit_rot, limit_trans] = analytic_free_screws(make_grasp(theta, theta));
  double previous = INFINITY;
  for (double gap = 1e-2; gap > 5e-7; gap /= 10) {
    const auto [internal, external] = analytic_free_screws(make_grasp(theta + gap / 2, theta - gap / 2));
    const auto& r = internal.rotation();
    const double err = (r.axis_dir.vec() - limit_rot.rotation().axis_dir.vec()).norm() + std::abs(r.pitch) +
                       (r.axis_point - limit_rot.rotation().axis_point).norm();
    CHECK(err < previous);
    previous = err;
    if (gap < 1e-4) CHECK(err < 1e-5);
  }
}

TEST_CASE("geometry classification") {
  const AntipodalGrasp crossed = make_grasp(45 * kDeg, -45 * kDeg);
  const AntipodalGrasp parallel = make_grasp(45 * kDeg, 45 * kDeg);

  const MobilityClass sphere = geometry_admissible_motions(crossed, Sphere{0.04});
  CHECK(sphere.kind == MobilityKind::TwoDof);
  CHECK(sphere.spherical);

  const MobilityClass box = geometry_admissible_motions(parallel, FlatBox{});
  REQUIRE(box.kind == MobilityKind::TranslationOnly);
  REQUIRE(box.screws.size() == 1);
  const Vec3 t = roller_axis(parallel, 1).vec().cross(Vec3::UnitY());
  CHECK(near(box.screws[0].pure_translation().dir.vec(), t, 1e-15));
  CHECK(geometry_admissible_motions(crossed, FlatBox{}).kind == MobilityKind::Fixed);

  const MobilityClass cyl = geometry_admissible_motions(crossed, Cylinder{0.025, UnitVec3::z()});
  REQUIRE(cyl.kind == MobilityKind::OneDof);
  CHECK(near(cyl.screws[0].direction().vec(), Vec3::UnitZ(), 1e-12));
  CHECK(geometry_admissible_motions(make_grasp(30 * kDeg, -50 * kDeg), Cylinder{0.025, UnitVec3::z()}).kind ==
        MobilityKind::Fixed);
  CHECK_THROWS_WITH_AS(geometry_admissible_motions(crossed, Cylinder{0.025, UnitVec3::y()}),
                       doctest::Contains("invalid cylinder grasp"), GeometryError);

  CHECK(geometry_admissible_motions(crossed, GeneralCurved{{1, 2}, {3, 0}}).kind == MobilityKind::TwoDof);
  CHECK(geometry_admissible_motions(crossed, GeneralCurved{{0, 0}, {0, 0}}).kind == MobilityKind::Fixed);
  CHECK(std::string(to_string(MobilityKind::TranslationOnly)) == "translation-only");
  CHECK_THROWS_AS(validate_geometry(Sphere{-1}), GeometryError);
  CHECK_THROWS_AS(validate_geometry(GeneralCurved{{NAN, 0}, {0, 0}}), GeometryError);
}
