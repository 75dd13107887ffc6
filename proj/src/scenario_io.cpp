#include "rollergrasp/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "json.hpp"

namespace rollergrasp {

namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

void require_keys(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) throw SchemaError((where.empty() ? "" : where + ".") + key + ": unknown key");
  }
}

std::string path(const std::string& where, std::string_view key) {
  return where.empty() ? std::string(key) : where + "." + std::string(key);
}

const json& field(const json& j, const std::string& where, std::string_view key) {
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path(where, key) + ": missing");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw SchemaError(where + ": not finite");
  return x;
}

double number_or(const json& j, const std::string& where, std::string_view key, double fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, path(where, key));
}

Vec3 vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw SchemaError(where + ": expected an array of 3 numbers");
  return {number(j[0], where + "[0]"), number(j[1], where + "[1]"), number(j[2], where + "[2]")};
}

UnitVec3 unit(const json& j, const std::string& where) {
  const Vec3 v = vec3(j, where);
  if (!(v.norm() > 0.0)) throw SchemaError(where + ": zero vector");
  return UnitVec3::normalized(v);
}

Eigen::Quaterniond orientation(const json& j, const std::string& where) {
  require_keys(j, where, {"axis", "angle"});
  const UnitVec3 axis = unit(field(j, where, "axis"), path(where, "axis"));
  const double angle = number(field(j, where, "angle"), path(where, "angle")) * kDeg;
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis.vec()));
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": expected a string");
  return j.get<std::string>();
}

SceneObject parse_object(const json& j) {
  const std::string w = "object";
  require_keys(j, w, {"shape", "radius", "axis", "half_length", "half_extents", "position", "orientation"});
  SceneObject obj;
  const std::string shape = text(field(j, w, "shape"), "object.shape");
  const auto reject = [&](std::string_view key) {
    if (j.contains(key)) throw SchemaError(path(w, key) + ": not used by shape '" + shape + "'");
  };
  if (shape == "sphere") {
    reject("axis"), reject("half_length"), reject("half_extents");
    obj.geometry = Sphere{number(field(j, w, "radius"), "object.radius")};
  } else if (shape == "cylinder") {
    reject("half_extents");
    obj.geometry = Cylinder{number(field(j, w, "radius"), "object.radius"), unit(field(j, w, "axis"), "object.axis"),
                            number_or(j, w, "half_length", 0.0)};
  } else if (shape == "box") {
    reject("radius"), reject("axis"), reject("half_length");
    obj.geometry = FlatBox{vec3(field(j, w, "half_extents"), "object.half_extents")};
  } else {
    throw SchemaError("object.shape: expected sphere, cylinder or box, got '" + shape + "'");
  }
  if (j.contains("position")) obj.initial.position = vec3(j["position"], "object.position");
  if (j.contains("orientation")) obj.initial.orientation = orientation(j["orientation"], "object.orientation");
  return obj;
}

GraspTemplate parse_grasp(const json& j, const FrictionTable& friction) {
  const std::string w = "grasp";
  require_keys(j, w,
               {"contacts", "normal", "reference_normal", "ee_position", "ee_orientation", "material", "mu_braked",
                "mu_unbraked"});
  GraspTemplate g;
  const json& contacts = field(j, w, "contacts");
  if (!contacts.is_array() || contacts.size() != 2) throw SchemaError("grasp.contacts: expected two points");
  g.contacts = {vec3(contacts[0], "grasp.contacts[0]"), vec3(contacts[1], "grasp.contacts[1]")};
  if (j.contains("normal")) g.normal = unit(j["normal"], "grasp.normal");
  if (j.contains("reference_normal")) g.reference_normal = unit(j["reference_normal"], "grasp.reference_normal");
  if (j.contains("ee_position")) g.ee_initial.position = vec3(j["ee_position"], "grasp.ee_position");
  if (j.contains("ee_orientation")) g.ee_initial.orientation = orientation(j["ee_orientation"], "grasp.ee_orientation");
  if (j.contains("material")) {
    if (j.contains("mu_braked") || j.contains("mu_unbraked")) {
      throw SchemaError("grasp.material: give either a material or explicit coefficients, not both");
    }
    const std::string m = text(j["material"], "grasp.material");
    try {
      g.mu_braked = lookup_mu(friction, m, BrakeState::Braked);
      g.mu_unbraked = lookup_mu(friction, m, BrakeState::Unbraked);
    } catch (const LookupError& e) {
      throw SchemaError(std::string("grasp.material: ") + e.what());
    }
  }
  g.mu_braked = number_or(j, w, "mu_braked", g.mu_braked);
  g.mu_unbraked = number_or(j, w, "mu_unbraked", g.mu_unbraked);
  if (!(g.mu_unbraked >= 0.0) || !(g.mu_unbraked <= g.mu_braked)) {
    throw SchemaError("grasp.mu_unbraked: must lie in [0, mu_braked]");
  }
  return g;
}

Surface parse_surface(const json& j, const std::string& w) {
  require_keys(j, w, {"point", "normal", "mu", "friction"});
  Surface s;
  s.point = vec3(field(j, w, "point"), path(w, "point"));
  s.normal = unit(field(j, w, "normal"), path(w, "normal"));
  s.mu = number_or(j, w, "mu", 0.0);
  if (s.mu < 0.0) throw SchemaError(path(w, "mu") + ": must be non-negative");
  if (j.contains("friction")) {
    const std::string mode = text(j["friction"], path(w, "friction"));
    if (mode == "normal-only") {
      s.friction_mode = FrictionMode::NormalOnly;
    } else if (mode == "no-slip") {
      s.friction_mode = FrictionMode::NoSlip;
    } else {
      throw SchemaError(path(w, "friction") + ": expected normal-only or no-slip");
    }
  }
  return s;
}

BrakeState brake(const json& j, const std::string& where) {
  const std::string b = text(j, where);
  if (b == "braked") return BrakeState::Braked;
  if (b == "unbraked") return BrakeState::Unbraked;
  throw SchemaError(where + ": expected braked or unbraked");
}

Step parse_step(const json& j, const std::string& w) {
  require_keys(j, w, {"duration", "dt", "pivots", "brakes", "ee_twist"});
  Step st;
  st.duration = number(field(j, w, "duration"), path(w, "duration"));
  st.dt = number_or(j, w, "dt", st.dt);
  const json& pivots = field(j, w, "pivots");
  if (!pivots.is_array() || pivots.size() != 2) throw SchemaError(path(w, "pivots") + ": expected two angles");
  st.pivots = {wrap_angle(number(pivots[0], path(w, "pivots[0]")) * kDeg),
               wrap_angle(number(pivots[1], path(w, "pivots[1]")) * kDeg)};
  if (j.contains("brakes")) {
    const json& b = j["brakes"];
    if (!b.is_array() || b.size() != 2) throw SchemaError(path(w, "brakes") + ": expected two brake states");
    st.brakes = {brake(b[0], path(w, "brakes[0]")), brake(b[1], path(w, "brakes[1]"))};
  }
  if (j.contains("ee_twist")) {
    const json& t = j["ee_twist"];
    const std::string tw = path(w, "ee_twist");
    require_keys(t, tw, {"angular", "linear"});
    if (t.contains("angular")) st.ee.angular = vec3(t["angular"], path(tw, "angular")) * kDeg;
    if (t.contains("linear")) st.ee.origin_velocity = vec3(t["linear"], path(tw, "linear"));
  }
  return st;
}

}  // namespace

Scenario parse_scenario(std::string_view json_text, const FrictionTable& friction) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scenario: ") + e.what());
  }
  require_keys(j, "", {"name", "object", "grasp", "environment", "steps"});
  Scenario s;
  if (j.contains("name")) s.name = text(j["name"], "name");
  s.object = parse_object(field(j, "", "object"));
  s.grasp = parse_grasp(field(j, "", "grasp"), friction);
  if (j.contains("environment")) {
    const json& env = j["environment"];
    if (!env.is_array()) throw SchemaError("environment: expected an array");
    for (std::size_t i = 0; i < env.size(); ++i) {
      s.environment.push_back(parse_surface(env[i], "environment[" + std::to_string(i) + "]"));
    }
  }
  const json& steps = field(j, "", "steps");
  if (!steps.is_array()) throw SchemaError("steps: expected an array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    s.steps.push_back(parse_step(steps[i], "steps[" + std::to_string(i) + "]"));
  }
  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& p, const FrictionTable& friction) {
  std::ifstream in(p);
  if (!in) throw SchemaError("cannot open scenario '" + p.string() + "'");
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_scenario(content, friction);
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  out << kTrajectoryCsvHeader << '\n';
  for (const TrajectoryRecord& r : records) {
    const Vec3& p = r.object.position;
    const auto& q = r.object.orientation;
    const Vec3& w = r.object_twist.angular;
    const Vec3& v = r.object_velocity;
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},"
                       "{:.17g},{:.17g},{:.17g},{}\n",
                       r.time, p.x(), p.y(), p.z(), q.x(), q.y(), q.z(), q.w(), w.x(), w.y(), w.z(), v.x(), v.y(),
                       v.z(), to_string(r.status));
  }
}

void write_trajectory_json(std::ostream& out, const std::vector<TrajectoryRecord>& records) {
  const auto arr = [](const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); };
  const auto pose = [&](const Pose& p) {
    const auto& q = p.orientation;
    return json{{"position", arr(p.position)}, {"orientation", json::array({q.x(), q.y(), q.z(), q.w()})}};
  };
  json doc = json::array();
  for (const TrajectoryRecord& r : records) {
    doc.push_back({{"t", r.time},
                   {"object", pose(r.object)},
                   {"twist", {{"angular", arr(r.object_twist.angular)}, {"linear", arr(r.object_twist.linear)}}},
                   {"velocity", arr(r.object_velocity)},
                   {"gripper", pose(r.gripper)},
                   {"status", to_string(r.status)},
                   {"active_contacts", r.active_contacts}});
  }
  out << doc.dump(2) << '\n';
}

}  // namespace rollergrasp
