#include "rollergrasp/friction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include "json.hpp"

namespace rollergrasp {

FrictionTable::FrictionTable(std::map<std::string, FrictionEntry> entries) : entries_(std::move(entries)) {
  for (const auto& [name, e] : entries_) {
    if (!(e.braked.mean > 0.0) || !(e.unbraked.mean > 0.0)) {
      throw SchemaError("friction table: " + name + ": means must be positive");
    }
    if (!(e.unbraked.mean < e.braked.mean)) {
      throw SchemaError("friction table: " + name + ": unbraked mean must be below braked mean");
    }
    if (!(e.braked.sd >= 0.0) || !(e.unbraked.sd >= 0.0)) {
      throw SchemaError("friction table: " + name + ": standard deviations must be non-negative");
    }
  }
}

std::string FrictionTable::known_materials() const {
  std::string out;
  for (const auto& [name, e] : entries_) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

const FrictionEntry& FrictionTable::entry(const std::string& material) const {
  const auto it = entries_.find(material);
  if (it == entries_.end()) {
    throw LookupError("unknown material '" + material + "' (known: " + known_materials() + ")");
  }
  return it->second;
}

const FrictionTable& default_friction_table() {
  static const FrictionTable table({
      {"plastic", {{0.809, 0.130}, {0.029, 0.015}}},
      {"glass", {{0.736, 0.162}, {0.034, 0.009}}},
      {"metal", {{0.491, 0.130}, {0.026, 0.013}}},
      {"wood", {{0.491, 0.037}, {0.024, 0.003}}},
  });
  return table;
}

namespace {

MeasuredCoefficient coefficient_from_json(const nlohmann::json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object with mean and sd");
  for (const auto& [key, value] : j.items()) {
    if (key != "mean" && key != "sd") throw SchemaError(where + "." + key + ": unknown key");
  }
  if (!j.contains("mean") || !j["mean"].is_number()) throw SchemaError(where + ".mean: missing or not a number");
  const double sd = j.contains("sd") ? j["sd"].get<double>() : 0.0;
  if (j.contains("sd") && !j["sd"].is_number()) throw SchemaError(where + ".sd: not a number");
  return {j["mean"].get<double>(), sd};
}

FrictionTable table_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SchemaError("friction table: top level must be an object");
  std::map<std::string, FrictionEntry> entries;
  for (const auto& [material, states] : j.items()) {
    if (!states.is_object()) throw SchemaError(material + ": expected {braked, unbraked}");
    for (const auto& [key, value] : states.items()) {
      if (key != "braked" && key != "unbraked") throw SchemaError(material + "." + key + ": unknown key");
    }
    if (!states.contains("braked")) throw SchemaError(material + ".braked: missing");
    if (!states.contains("unbraked")) throw SchemaError(material + ".unbraked: missing");
    entries.emplace(material, FrictionEntry{coefficient_from_json(states["braked"], material + ".braked"),
                                            coefficient_from_json(states["unbraked"], material + ".unbraked")});
  }
  return FrictionTable(std::move(entries));
}

}  // namespace

FrictionTable parse_friction_table(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("friction table: ") + e.what());
  }
  return table_from_json(j);
}

FrictionTable load_friction_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open friction table '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_friction_table(text);
}

double lookup_mu(const FrictionTable& table, const std::string& material, BrakeState state, MuBias bias) {
  const FrictionEntry& e = table.entry(material);
  const MeasuredCoefficient& c = state == BrakeState::Braked ? e.braked : e.unbraked;
  switch (bias) {
    case MuBias::Mean: return c.mean;
    case MuBias::Driving: return std::max(0.0, c.mean - c.sd);
    case MuBias::Resisting: return c.mean + c.sd;
  }
  return c.mean;
}

double breakaway_force(const FrictionTable& table, const std::string& material, BrakeState state,
                       double normal_load) {
  if (!(normal_load >= 0.0) || !std::isfinite(normal_load)) {
    throw ContractViolation("normal load must be finite and non-negative");
  }
  return lookup_mu(table, material, state) * normal_load;
}

double contrast_ratio(const FrictionTable& table, const std::string& material) {
  const FrictionEntry& e = table.entry(material);
  return e.braked.mean / e.unbraked.mean;
}

}  // namespace rollergrasp
