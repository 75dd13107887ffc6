#include "rollergrasp/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "rollergrasp/scenario_io.hpp"
#include "rollergrasp/strategies.hpp"

namespace rollergrasp {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

std::string fmt_vec(const Vec3& v) { return fmt::format("({:.6g}, {:.6g}, {:.6g})", v.x(), v.y(), v.z()); }

std::string fmt_screw(const Screw& s) {
  if (s.is_translation()) return "translation dir=" + fmt_vec(s.pure_translation().dir.vec());
  const auto& r = s.rotation();
  return fmt::format("rotation point={} dir={} pitch={:.6g}", fmt_vec(r.axis_point), fmt_vec(r.axis_dir.vec()),
                     r.pitch);
}

void print_twist(std::ostream& out, const char* label, const Twist& t) {
  out << label << ": w=" << fmt_vec(t.angular) << " v=" << fmt_vec(t.linear) << '\n';
}

FrictionTable active_friction_table() {
  if (const char* p = std::getenv("ROLLERGRASP_FRICTION_TABLE"); p != nullptr && *p != '\0') {
    return load_friction_table(p);
  }
  return default_friction_table();
}

const Step& step_at(const Scenario& s, std::size_t k) {
  if (k >= s.steps.size()) {
    throw SchemaError(fmt::format("--step: index {} out of range (scenario has {} steps)", k, s.steps.size()));
  }
  return s.steps[k];
}

int cmd_mobility(const std::string& file, std::size_t k, std::ostream& out) {
  const Scenario s = load_scenario(file, active_friction_table());
  MotionProblem problem = build_problem(s, initial_state(s), step_at(s, k));
  problem.ee_twist = Twist::zero(Frame::Stationary);
  const MobilityReport r = classify_mobility(problem);
  out << "kind: " << to_string(r.kind) << '\n';
  out << "free_dims: " << r.free_dims << '\n';
  out << "spherical: " << (r.spherical ? "yes" : "no") << '\n';
  for (std::size_t i = 0; i < r.free_screws.size(); ++i) {
    out << "screw " << i + 1 << ": " << fmt_screw(r.free_screws[i]) << '\n';
  }
  out << "active_contacts: " << r.active_contacts.size() << '\n';
  return kExitOk;
}

int cmd_solve(const std::string& file, std::size_t k, std::ostream& out) {
  const Scenario s = load_scenario(file, active_friction_table());
  const MotionSolution sol = solve_object_motion(build_problem(s, initial_state(s), step_at(s, k)));
  out << "status: " << to_string(sol.status) << '\n';
  out << "free_dims: " << sol.free_dims << '\n';
  if (!sol.dropped.empty()) {
    out << "dropped:";
    for (std::size_t d : sol.dropped) out << ' ' << d;
    out << '\n';
  }
  print_twist(out, "object_twist_rel", sol.object_twist_rel);
  print_twist(out, "object_twist_world", sol.object_twist_world);
  out << fmt::format("residual: {:.3g}\n", sol.residual);
  return sol.status == SolveStatus::Jammed ? kExitOutcome : kExitOk;
}

int cmd_simulate(const std::string& file, const std::string& out_path, const std::string& format, std::ostream& out,
                 std::ostream& err) {
  const Scenario s = load_scenario(file, active_friction_table());
  std::vector<TrajectoryRecord> records;
  try {
    records = run_scenario(s);
  } catch (const SimulationError& e) {
    err << "simulation failed at step " << e.step_index() << ": " << e.what() << '\n';
    return kExitOutcome;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw SchemaError("--out: cannot write '" + out_path + "'");
  if (format == "json") {
    write_trajectory_json(f, records);
  } else {
    write_trajectory_csv(f, records);
  }
  const auto jammed = std::count_if(records.begin(), records.end(),
                                    [](const TrajectoryRecord& r) { return r.status == SolveStatus::Jammed; });
  const TrajectoryRecord& last = records.back();
  out << fmt::format("records: {}\n", records.size());
  out << "final_position: " << fmt_vec(last.object.position) << '\n';
  out << fmt::format("jammed_records: {}\n", jammed);
  return jammed > 0 ? kExitOutcome : kExitOk;
}

int cmd_pick_place(const PickPlaceLoads& loads, std::ostream& out) {
  validate(loads);
  const AngleWindow w = pick_place_window(loads);
  if (!w.feasible) {
    if (w.reason.rfind("infeasible: normal", 0) == 0) {
      out << "window: none\n";
    } else {
      out << fmt::format("window: ({:.2f} deg, {:.2f} deg)\n", w.lower * kRadToDeg, w.upper * kRadToDeg);
    }
    out << "feasible: no\n" << "reason: " << w.reason << '\n';
    return kExitOutcome;
  }
  out << fmt::format("window: ({:.2f} deg, {:.2f} deg)\n", w.lower * kRadToDeg, w.upper * kRadToDeg);
  out << "feasible: yes\n";
  return kExitOk;
}

int cmd_friction(const std::string& material, const std::string& state, const std::optional<double>& load,
                 const std::string& bias, std::ostream& out) {
  const FrictionTable table = active_friction_table();
  const BrakeState b = state == "braked" ? BrakeState::Braked : BrakeState::Unbraked;
  const MuBias mb = bias == "driving" ? MuBias::Driving : bias == "resisting" ? MuBias::Resisting : MuBias::Mean;
  const double mu = lookup_mu(table, material, b, mb);
  out << fmt::format("{}\n", mu);
  if (load) {
    if (!(*load >= 0.0)) throw ContractViolation("--load must be non-negative");
    out << fmt::format("breakaway_force: {:.6g} N\n", mu * *load);
  }
  return kExitOk;
}

bool is_input_error(const Error& e) {
  return dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const LookupError*>(&e) ||
         dynamic_cast<const ContractViolation*>(&e) || dynamic_cast<const GeometryError*>(&e) ||
         dynamic_cast<const GraspError*>(&e);
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kinematics and quasi-static simulation for roller-fingertip grasps", "rollergrasp"};
  app.require_subcommand(1);

  std::string scenario;
  std::size_t step_index = 0;

  auto* mobility = app.add_subcommand("mobility", "Classify the grasped object's free motions at the initial pose");
  mobility->add_option("scenario", scenario, "Scenario JSON file")->required();
  mobility->add_option("--step", step_index, "Step whose pivots and brakes define the grasp");

  auto* solve = app.add_subcommand("solve", "Solve the object twist for one step at the initial pose");
  solve->add_option("scenario", scenario, "Scenario JSON file")->required();
  solve->add_option("--step", step_index, "Step index")->required();

  std::string out_path;
  std::string format = "csv";
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its trajectory");
  simulate->add_option("scenario", scenario, "Scenario JSON file")->required();
  simulate->add_option("--out", out_path, "Output file")->required();
  simulate->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  PickPlaceLoads loads;
  auto* feasibility = app.add_subcommand("feasibility", "Static friction feasibility checks");
  feasibility->require_subcommand(1);
  auto* pick_place = feasibility->add_subcommand("pick-place", "Pivot-angle window for roller-adaptive pick and place");
  pick_place->add_option("--mu-r", loads.mu_roller, "Rolling-direction coefficient of the unbraked roller");
  pick_place->add_option("--mu-e", loads.mu_env, "Placement-surface coefficient")->required();
  pick_place->add_option("--f-grip", loads.f_grip, "Gripping force [N]")->required();
  pick_place->add_option("--f-obj", loads.f_obj, "Object weight [N]")->required();
  pick_place->add_option("--f-normal", loads.f_normal, "Surface normal force [N]")->required();

  std::string material;
  std::string state;
  std::optional<double> load;
  std::string bias = "mean";
  auto* friction = app.add_subcommand("friction", "Look up a breakaway friction coefficient");
  friction->add_option("--material", material, "Material name")->required();
  friction->add_option("--state", state, "Brake state")->required()->check(CLI::IsMember({"braked", "unbraked"}));
  friction->add_option("--load", load, "Normal load [N]");
  friction->add_option("--bias", bias, "Coefficient bias")->check(CLI::IsMember({"mean", "driving", "resisting"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*mobility) return cmd_mobility(scenario, step_index, out);
    if (*solve) return cmd_solve(scenario, step_index, out);
    if (*simulate) return cmd_simulate(scenario, out_path, format, out, err);
    if (*pick_place) return cmd_pick_place(loads, out);
    if (*friction) return cmd_friction(material, state, load, bias, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_input_error(e) ? kExitInput : kExitOutcome;
  }
  return kExitInput;
}

}  // namespace rollergrasp
