#include "thermrom/material.hpp"

#include "thermrom/errors.hpp"

namespace thermrom {

void validate(const Material& m) {
  if (!(m.density > 0.0))
    throw ConfigError("material '" + m.name + "': density must be > 0");
  if (!(m.specific_heat > 0.0))
    throw ConfigError("material '" + m.name + "': specific_heat must be > 0");
  if (!(m.conductivity > 0.0))
    throw ConfigError("material '" + m.name + "': conductivity must be > 0");
}

}  // namespace thermrom
