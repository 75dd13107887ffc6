#pragma once

// Breakaway friction coefficients of the roller fingertip per contact material.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "rollergrasp/grasp.hpp"

namespace rollergrasp {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

struct MeasuredCoefficient {
  double mean;
  double sd;
};

struct FrictionEntry {
  MeasuredCoefficient braked;
  MeasuredCoefficient unbraked;
};

// Which end of the spread to use. Driving friction (the force that has to be
// there for the maneuver) is pessimistic at mean - sd, resisting friction at
// mean + sd.
enum class MuBias { Mean, Driving, Resisting };

class FrictionTable {
 public:
  // Throws SchemaError when an entry violates 0 < unbraked.mean < braked.mean.
  explicit FrictionTable(std::map<std::string, FrictionEntry> entries);

  const std::map<std::string, FrictionEntry>& entries() const { return entries_; }
  const FrictionEntry& entry(const std::string& material) const;  // throws LookupError
  std::string known_materials() const;

 private:
  std::map<std::string, FrictionEntry> entries_;
};

// Plastic, glass, metal and wood, measured under a 900 g load.
const FrictionTable& default_friction_table();

// {material: {braked: {mean, sd}, unbraked: {mean, sd}}}
FrictionTable parse_friction_table(std::string_view json_text);
FrictionTable load_friction_table(const std::filesystem::path& path);

double lookup_mu(const FrictionTable& table, const std::string& material, BrakeState state,
                 MuBias bias = MuBias::Mean);

// Coulomb breakaway force for a normal load in newtons.
double breakaway_force(const FrictionTable& table, const std::string& material, BrakeState state,
                       double normal_load);

double contrast_ratio(const FrictionTable& table, const std::string& material);

inline double weight_from_grams(double grams) { return grams * 1e-3 * kStandardGravity; }

}  // namespace rollergrasp
