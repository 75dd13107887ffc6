#pragma once

// Batched kernels over independent grasps, problems and scenarios.
//
// Each kernel has an OpenMP-parallel form and a serial reference; both write
// results by input index, so their outputs are identical.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rollergrasp/simulator.hpp"

namespace rollergrasp {

struct GraspAnalysis {
  int rank = 0;
  int null_dim = 0;
  double max_principal_angle = 0.0;  // rad, between analytic and numeric kernels (0 unless null_dim == 2)
  double analytic_residual = 0.0;    // max ||M xi|| / (||M|| ||xi||) over the analytic screws
};

// Largest principal angle between the column spans of two 6 x k bases.
double max_principal_angle(const Eigen::Matrix<double, 6, Eigen::Dynamic>& a,
                           const Eigen::Matrix<double, 6, Eigen::Dynamic>& b);

GraspAnalysis analyze_grasp(const AntipodalGrasp& grasp);

// Random generic grasp: random contact midpoint and gap direction, random
// perpendicular reference normal, distinct random pivots.
std::vector<AntipodalGrasp> random_generic_grasps(std::size_t count, std::uint64_t seed);

template <typename T>
struct Outcome {
  std::optional<T> value;
  std::string error;  // set when value is empty
};

std::vector<GraspAnalysis> analyze_grasps(const std::vector<AntipodalGrasp>& grasps);
std::vector<GraspAnalysis> analyze_grasps_serial(const std::vector<AntipodalGrasp>& grasps);

std::vector<Outcome<MotionSolution>> solve_batch(const std::vector<MotionProblem>& problems);
std::vector<Outcome<MotionSolution>> solve_batch_serial(const std::vector<MotionProblem>& problems);

using Trajectory = std::vector<TrajectoryRecord>;
std::vector<Outcome<Trajectory>> run_scenarios(const std::vector<Scenario>& scenarios);
std::vector<Outcome<Trajectory>> run_scenarios_serial(const std::vector<Scenario>& scenarios);

}  // namespace rollergrasp
