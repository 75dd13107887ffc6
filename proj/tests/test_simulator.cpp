#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "rollergrasp/scenario_io.hpp"

using namespace rollergrasp;

namespace {

const std::string kDir = ROLLERGRASP_SCENARIO_DIR;

Scenario scenario(const std::string& name) { return load_scenario(kDir + "/" + name); }

// Signed rotation angle about the world z axis.
double yaw(const Pose& p) {
  const auto& q = p.orientation;
  return 2.0 * std::atan2(q.z(), q.w());
}

double roll(const Pose& p) {
  const auto& q = p.orientation;
  return 2.0 * std::atan2(q.x(), q.w());
}

std::string csv(const std::vector<TrajectoryRecord>& r) {
  std::ostringstream out;
  write_trajectory_csv(out, r);
  return out.str();
}

constexpr const char* kMinimal = R"({
  "name": "minimal",
  "object": {"shape": "sphere", "radius": 0.02},
  "grasp": {"contacts": [[0, 0.02, 0], [0, -0.02, 0]]},
  "steps": [{"duration": 0.01, "pivots": [0, 0]}]
})";

nlohmann::json minimal() { return nlohmann::json::parse(kMinimal); }

void check_schema_error(const nlohmann::json& j, const std::string& fragment) {
  CAPTURE(fragment);
  CHECK_THROWS_WITH_AS(parse_scenario(j.dump()), doctest::Contains(fragment.c_str()), SchemaError);
}

}  // namespace

TEST_CASE("planar drag lifts 20 mm and slides 20 mm") {
  const auto r = run_scenario(scenario("planar_drag.json"));
  REQUIRE(r.size() == 2001);
  const TrajectoryRecord& last = r.back();
  CHECK(last.time == 2.0);
  CHECK(std::abs(last.object.position.x() - 0.02) <= 0.01 * 0.02);
  CHECK(std::abs(last.object.position.y()) < 1e-15);
  CHECK(last.gripper.position.z() == doctest::Approx(0.04));
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    REQUIRE(r[i].status == SolveStatus::Unique);
    REQUIRE(r[i + 1].time > r[i].time);
    REQUIRE(r[i].active_contacts == std::vector<std::size_t>{0});
  }
}

TEST_CASE("property: contact and antipodality preserved along a drag") {
  const Scenario s = scenario("two_phase_drag.json");
  const auto r = run_scenario(s);
  for (const TrajectoryRecord& rec : r) {
    const SimState st{rec.time, rec.object, rec.gripper};
    REQUIRE(std::abs(surface_gap(s.object.geometry, rec.object, s.environment[0])) <= 1e-6);
    const AntipodalGrasp g = current_grasp(s, st, s.steps[0]);
    const Vec3 gap = g.finger(1).contact_point - g.finger(2).contact_point;
    REQUIRE(gap.cross(g.grasp_normal().vec()).norm() <= 1e-6);
    REQUIRE(gap.dot(g.grasp_normal().vec()) > 0.0);
  }
}

TEST_CASE("two-phase drag keeps moving the same way across the pivot flip") {
  const Scenario s = scenario("two_phase_drag.json");
  const auto r = run_scenario(s);
  REQUIRE(r.size() == 2001);
  const TrajectoryRecord& end_lift = r[999];
  const TrajectoryRecord& start_descend = r[1000];
  CHECK(start_descend.time == 1.0);
  CHECK((end_lift.object_velocity - start_descend.object_velocity).norm() <= 1e-9);
  CHECK(end_lift.object_velocity.x() == doctest::Approx(0.01));
  for (std::size_t i = 1; i < r.size(); ++i) REQUIRE(r[i].object.position.x() > r[i - 1].object.position.x());
  CHECK(r.back().gripper.position.z() == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(r.back().object.position.x() == doctest::Approx(0.02).epsilon(1e-9));
}

TEST_CASE("cylinder twirl accumulates 0.4 rad") {
  const auto r = run_scenario(scenario("cylinder_twirl.json"));
  CHECK(std::abs(yaw(r.back().object) - 0.4) <= 0.01 * 0.4);
  CHECK(r.back().object.position.norm() == doctest::Approx(0.05));
}

TEST_CASE("alternating brakes roll a lying cylinder monotonically") {
  const Scenario s = scenario("alternating_brake_roll.json");
  const auto r = run_scenario(s);
  for (std::size_t i = 1; i < r.size(); ++i) {
    REQUIRE(r[i].status == SolveStatus::Unique);
    REQUIRE(r[i].object.position.y() >= r[i - 1].object.position.y());
    REQUIRE(roll(r[i].object) <= roll(r[i - 1].object));
  }
  CHECK(r.back().object.position.y() == doctest::Approx(0.02).epsilon(1e-9));
  // Rolling without slip: travel equals radius times rotation.
  CHECK(r.back().object.position.y() == doctest::Approx(-0.025 * roll(r.back().object)).epsilon(1e-9));
  CHECK(r.back().object.position.z() == doctest::Approx(0.025).epsilon(1e-12));
}

TEST_CASE("empty motion keeps the pose") {
  const auto r = run_scenario(scenario("empty_motion.json"));
  for (const TrajectoryRecord& rec : r) {
    REQUIRE(rec.object.position == Vec3(0, 0, 0.03));
    REQUIRE(rec.object.orientation.coeffs() == Eigen::Quaterniond::Identity().coeffs());
  }
}

TEST_CASE("jammed steps are recorded, not skipped") {
  const auto r = run_scenario(scenario("drag_jam.json"));
  REQUIRE(r.size() == 501);
  for (const TrajectoryRecord& rec : r) {
    REQUIRE(rec.status == SolveStatus::Jammed);
    REQUIRE(rec.object.position == Vec3(0, 0, 0.02));
    REQUIRE(rec.gripper.position == Vec3(0, 0, 0.02));
    REQUIRE(rec.active_contacts.empty());
  }
}

TEST_CASE("property: runs are deterministic") {
  for (const char* name : {"planar_drag.json", "alternating_brake_roll.json", "braked_swing.json"}) {
    const Scenario s = scenario(name);
    CHECK(csv(run_scenario(s)) == csv(run_scenario(s)));
  }
}

TEST_CASE("property: first-order convergence under dt halving") {
  Scenario s = scenario("braked_swing.json");
  std::vector<Vec3> finals;
  for (double dt : {0.01, 0.005, 0.0025, 0.00125}) {
    s.steps[0].dt = dt;
    finals.push_back(run_scenario(s).back().object.position);
  }
  for (std::size_t i = 0; i + 2 < finals.size(); ++i) {
    const double ratio = (finals[i] - finals[i + 1]).norm() / (finals[i + 1] - finals[i + 2]).norm();
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 2.5);
  }
  // The object follows the braked gripper: a quarter turn about the z axis.
  CHECK((finals.back() - Vec3(0, 0.1, 0)).norm() < 2e-3);
}

TEST_CASE("support points") {
  Pose p;
  p.position = Vec3(1, 2, 3);
  CHECK((support_point(Sphere{0.5}, p, Vec3::UnitZ(), Vec3::Zero()) - Vec3(1, 2, 3.5)).norm() < 1e-15);
  const Cylinder lying{0.1, UnitVec3::x(), 0.3};
  CHECK((support_point(lying, p, -Vec3::UnitZ(), Vec3(1.2, 0, 0)) - Vec3(1.2, 2, 2.9)).norm() < 1e-15);
  CHECK((support_point(lying, p, -Vec3::UnitZ(), Vec3(9, 0, 0)) - Vec3(1.3, 2, 2.9)).norm() < 1e-15);
  CHECK((support_point(lying, p, Vec3::UnitX(), Vec3::Zero()) - Vec3(1.3, 2, 3)).norm() < 1e-15);
  const FlatBox box{Vec3(0.1, 0.2, 0.3)};
  CHECK((support_point(box, p, Vec3::UnitY(), Vec3(1.05, 0, 3.1)) - Vec3(1.05, 2.2, 3.1)).norm() < 1e-15);
  const Vec3 diag = Vec3(1, 1, 1).normalized();
  CHECK((support_point(box, p, diag, Vec3::Zero()) - Vec3(1.1, 2.2, 3.3)).norm() < 1e-15);
  const Surface floor{Vec3(0, 0, 2.5), UnitVec3::z(), 0.0, FrictionMode::NormalOnly};
  CHECK(surface_gap(Sphere{0.5}, p, floor) == doctest::Approx(0.0));
}

TEST_CASE("gripper motion is given at the gripper origin") {
  Pose g;
  g.position = Vec3(1, 0, 0);
  const Twist t = ee_twist_at_origin(EeMotion{Vec3(0, 0, 2), Vec3(0, 0.5, 0)}, g);
  CHECK((point_velocity(t, g.position) - Vec3(0, 0.5, 0)).norm() < 1e-15);
  CHECK(t.frame == Frame::Stationary);
}

TEST_CASE("scenario parsing") {
  const Scenario s = parse_scenario(kMinimal);
  CHECK(s.name == "minimal");
  CHECK(s.steps[0].dt == 1e-3);
  CHECK(s.steps[0].brakes[0] == BrakeState::Unbraked);
  CHECK(s.grasp.mu_braked == 0.809);

  const Scenario roll = scenario("alternating_brake_roll.json");
  CHECK(roll.steps[0].pivots[0] == doctest::Approx(std::numbers::pi / 2));
  CHECK(roll.steps[1].brakes[1] == BrakeState::Braked);
  CHECK(roll.environment[0].friction_mode == FrictionMode::NoSlip);

  const Scenario swing = scenario("braked_swing.json");
  CHECK(swing.steps[0].ee.angular.z() == doctest::Approx(std::numbers::pi / 2));

  auto j = minimal();
  j["grasp"].erase("contacts");
  j["grasp"]["contacts"] = {{0, 0.02, 0}, {0, -0.02, 0}};
  j["grasp"]["material"] = "glass";
  CHECK(parse_scenario(j.dump()).grasp.mu_unbraked == 0.034);
}

TEST_CASE("scenario schema errors name the field") {
  auto j = minimal();
  j["colour"] = "red";
  check_schema_error(j, "colour: unknown key");

  j = minimal();
  j["object"]["mass"] = 1;
  check_schema_error(j, "object.mass: unknown key");

  j = minimal();
  j["object"]["shape"] = "torus";
  check_schema_error(j, "object.shape");

  j = minimal();
  j["object"].erase("radius");
  check_schema_error(j, "object.radius: missing");

  j = minimal();
  j["steps"][0]["pivots"] = {0};
  check_schema_error(j, "steps[0].pivots");

  j = minimal();
  j["steps"][0]["brakes"] = {"on", "off"};
  check_schema_error(j, "steps[0].brakes[0]");

  j = minimal();
  j["steps"][0]["dt"] = 1.0;
  check_schema_error(j, "steps[0].dt");

  j = minimal();
  j["steps"] = nlohmann::json::array();
  check_schema_error(j, "steps");

  j = minimal();
  j["grasp"]["contacts"][0] = {0, 0.03, 0};
  check_schema_error(j, "grasp.contacts[0]: not on the object surface");

  j = minimal();
  j["environment"] = {{{"point", {0, 0, 0}}, {"normal", {0, 0, 1}}}};
  check_schema_error(j, "environment[0]: object penetrates the surface");

  j = minimal();
  j["environment"] = {{{"point", {0, 0, -1}}, {"normal", {0, 0, 1}}, {"friction", "sticky"}}};
  check_schema_error(j, "environment[0].friction");

  j = minimal();
  j["grasp"]["material"] = "steel";
  check_schema_error(j, "grasp.material");

  CHECK_THROWS_AS(parse_scenario("{"), SchemaError);
  CHECK_THROWS_AS(load_scenario(kDir + "/missing.json"), SchemaError);
}

TEST_CASE("trajectory output") {
  const auto r = run_scenario(scenario("empty_motion.json"));
  const std::string text = csv(r);
  CHECK(text.rfind("t,px,py,pz,qx,qy,qz,qw,wx,wy,wz,vx,vy,vz,status\n", 0) == 0);
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  CHECK(line == "0,0,0,0.029999999999999999,0,0,0,1,0,0,0,0,0,0,underdetermined");

  std::ostringstream out;
  write_trajectory_json(out, r);
  const auto doc = nlohmann::json::parse(out.str());
  REQUIRE(doc.is_array());
  CHECK(doc.size() == r.size());
  CHECK(doc[0]["status"] == "underdetermined");
  CHECK(doc[0]["object"]["orientation"][3] == 1.0);
}

TEST_CASE("simulation errors carry the step index") {
  const SimulationError e(3, "contacts lost");
  CHECK(e.step_index() == 3);
  CHECK(std::string(e.what()).find("contacts lost") != std::string::npos);
}
