#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "thermrom/material.hpp"
#include "thermrom/power_profile.hpp"

namespace thermrom {

using Vec3 = std::array<double, 3>;

/// Axis-aligned cuboid.
struct Box {
  Vec3 origin{};  // m
  Vec3 size{};    // m

  double volume() const { return size[0] * size[1] * size[2]; }
  Vec3 center() const {
    return {origin[0] + 0.5 * size[0], origin[1] + 0.5 * size[1], origin[2] + 0.5 * size[2]};
  }
  bool contains(const Vec3& p) const;
};

/// One solid body: geometry, material, power schedule and probe location.
struct BodySpec {
  std::string id;
  Box box;
  Material material;
  PowerProfile power;
  std::optional<Vec3> probe;  // defaults to box center

  Vec3 probe_point() const { return probe ? *probe : box.center(); }

  /// Thermal capacitance C = rho * c_p * V [J/K].
  double capacitance() const { return material.volumetric_capacity() * box.volume(); }
};

enum class BoundaryKind { Insulated, Convection };

struct Boundary {
  BoundaryKind kind{BoundaryKind::Insulated};
  double h{};                  // W/(m^2 K), Convection only
  double ambient{};            // degC, Convection only
  double fluid_capacitance{};  // J/K, Convection only
};

struct SystemConfig {
  std::vector<BodySpec> bodies;
  Boundary boundary;
  double initial_temperature{20.0};  // degC

  /// Sum of body capacitances, plus the fluid capacitance under Convection.
  double total_capacitance() const;
};

/// C = rho * c_p * V for one body.
double thermal_capacitance(const BodySpec& body);

/// Total-power-over-total-capacitance slope at time t [K/s]. The Convection
/// fluid capacitance enters the denominator.
double slope_total(const SystemConfig& system, double at_time);

/// Insulated-only overload over a plain body list.
double slope_total(const std::vector<BodySpec>& bodies, double at_time);

/// Full-config validation; throws ConfigError with the offending field.
void validate(const SystemConfig& system);

/// JSON round trip. Schema: {"initial_temperature", "boundary"
/// {"type","h","ambient","fluid_capacitance"}, "bodies" [{"id","origin",
/// "size","material"{...},"power"[{"start_time","watts"}],"probe"?}]}.
SystemConfig load_system_config(const std::filesystem::path& path);
SystemConfig parse_system_config(const std::string& json_text);
std::string to_json(const SystemConfig& system);

}  // namespace thermrom
