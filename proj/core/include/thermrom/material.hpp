#pragma once

#include <string>

namespace thermrom {

/// Constant-property solid material (SI units).
struct Material {
  std::string name;
  double density{};        // kg/m^3
  double specific_heat{};  // J/(kg K)
  double conductivity{};   // W/(m K)

  /// Thermal diffusivity alpha = k / (rho * c_p) [m^2/s].
  double diffusivity() const { return conductivity / (density * specific_heat); }

  /// Volumetric heat capacity rho * c_p [J/(m^3 K)].
  double volumetric_capacity() const { return density * specific_heat; }
};

/// Throws ConfigError if any property is non-positive.
void validate(const Material& m);

}  // namespace thermrom
