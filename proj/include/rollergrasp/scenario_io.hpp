#pragma once

// JSON scenario files and trajectory serialization (CSV / JSON).
//
// File units: meters, seconds, newtons; angles and angular rates in degrees.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rollergrasp/friction.hpp"
#include "rollergrasp/simulator.hpp"

namespace rollergrasp {

// Unknown keys and malformed fields raise SchemaError naming the field path.
// `friction` resolves grasp.material when present.
Scenario parse_scenario(std::string_view json_text, const FrictionTable& friction = default_friction_table());
Scenario load_scenario(const std::filesystem::path& path, const FrictionTable& friction = default_friction_table());

inline constexpr std::string_view kTrajectoryCsvHeader = "t,px,py,pz,qx,qy,qz,qw,wx,wy,wz,vx,vy,vz,status";

// Twist columns: angular velocity (rad/s) and velocity of the object's reference point (m/s).
void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRecord>& records);
void write_trajectory_json(std::ostream& out, const std::vector<TrajectoryRecord>& records);

}  // namespace rollergrasp
