#include "thermrom/system_config.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "thermrom/errors.hpp"

namespace thermrom {

using nlohmann::json;

bool Box::contains(const Vec3& p) const {
  for (int a = 0; a < 3; ++a)
    if (p[a] < origin[a] || p[a] > origin[a] + size[a]) return false;
  return true;
}

double SystemConfig::total_capacitance() const {
  double c = 0.0;
  for (const auto& b : bodies) c += b.capacitance();
  if (boundary.kind == BoundaryKind::Convection) c += boundary.fluid_capacitance;
  return c;
}

double thermal_capacitance(const BodySpec& body) { return body.capacitance(); }

double slope_total(const SystemConfig& system, double at_time) {
  double power = 0.0;
  for (const auto& b : system.bodies) power += b.power.at(at_time);
  return power / system.total_capacitance();
}

double slope_total(const std::vector<BodySpec>& bodies, double at_time) {
  SystemConfig system;
  system.bodies = bodies;
  return slope_total(system, at_time);
}

namespace {

// Boxes overlap only if they overlap with positive measure on every axis;
// face contact is allowed.
bool boxes_overlap(const Box& a, const Box& b) {
  for (int ax = 0; ax < 3; ++ax) {
    const double lo = std::max(a.origin[ax], b.origin[ax]);
    const double hi = std::min(a.origin[ax] + a.size[ax], b.origin[ax] + b.size[ax]);
    if (!(hi - lo > 1e-12)) return false;
  }
  return true;
}

}  // namespace

void validate(const SystemConfig& system) {
  if (system.bodies.empty()) throw ConfigError("config: at least one body required");
  for (const auto& body : system.bodies) {
    if (body.id.empty()) throw ConfigError("config: body id must be non-empty");
    for (int a = 0; a < 3; ++a)
      if (!(body.box.size[a] > 0.0))
        throw ConfigError("body '" + body.id + "': box size components must be > 0");
    validate(body.material);
    validate(body.power);
    if (!body.box.contains(body.probe_point()))
      throw ConfigError("body '" + body.id + "': probe point lies outside the box");
  }
  for (std::size_t i = 0; i < system.bodies.size(); ++i)
    for (std::size_t j = i + 1; j < system.bodies.size(); ++j) {
      if (system.bodies[i].id == system.bodies[j].id)
        throw ConfigError("config: duplicate body id '" + system.bodies[i].id + "'");
      if (boxes_overlap(system.bodies[i].box, system.bodies[j].box))
        throw ConfigError("config: bodies '" + system.bodies[i].id + "' and '" +
                          system.bodies[j].id + "' overlap");
    }
  if (system.boundary.kind == BoundaryKind::Convection) {
    if (!(system.boundary.h > 0.0)) throw ConfigError("boundary: convection requires h > 0");
    if (system.boundary.fluid_capacitance < 0.0)
      throw ConfigError("boundary: fluid_capacitance must be >= 0");
  }
}

namespace {

Vec3 vec3_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError("config: " + where + " must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json to_json_vec(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace

SystemConfig parse_system_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }

  SystemConfig system;
  try {
    system.initial_temperature = doc.value("initial_temperature", 20.0);

    if (doc.contains("boundary")) {
      const auto& jb = doc["boundary"];
      const std::string type = jb.value("type", "insulated");
      if (type == "insulated") {
        system.boundary.kind = BoundaryKind::Insulated;
      } else if (type == "convection") {
        system.boundary.kind = BoundaryKind::Convection;
        system.boundary.h = jb.at("h").get<double>();
        system.boundary.ambient = jb.value("ambient", system.initial_temperature);
        system.boundary.fluid_capacitance = jb.value("fluid_capacitance", 0.0);
      } else {
        throw ConfigError("config: boundary.type must be 'insulated' or 'convection'");
      }
    }

    if (!doc.contains("bodies")) throw ConfigError("config: missing 'bodies'");
    for (const auto& jbody : doc["bodies"]) {
      BodySpec body;
      body.id = jbody.at("id").get<std::string>();
      body.box.origin = vec3_from(jbody.at("origin"), "bodies[].origin");
      body.box.size = vec3_from(jbody.at("size"), "bodies[].size");
      const auto& jm = jbody.at("material");
      body.material.name = jm.value("name", "");
      body.material.density = jm.at("density").get<double>();
      body.material.specific_heat = jm.at("specific_heat").get<double>();
      body.material.conductivity = jm.at("conductivity").get<double>();
      if (jbody.contains("power"))
        for (const auto& jseg : jbody["power"])
          body.power.segments.push_back(
              {jseg.at("start_time").get<double>(), jseg.at("watts").get<double>()});
      if (jbody.contains("probe")) body.probe = vec3_from(jbody["probe"], "bodies[].probe");
      system.bodies.push_back(std::move(body));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  validate(system);
  return system;
}

SystemConfig load_system_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system_config(ss.str());
}

std::string to_json(const SystemConfig& system) {
  json doc;
  doc["initial_temperature"] = system.initial_temperature;
  if (system.boundary.kind == BoundaryKind::Insulated) {
    doc["boundary"] = {{"type", "insulated"}};
  } else {
    doc["boundary"] = {{"type", "convection"},
                       {"h", system.boundary.h},
                       {"ambient", system.boundary.ambient},
                       {"fluid_capacitance", system.boundary.fluid_capacitance}};
  }
  doc["bodies"] = json::array();
  for (const auto& body : system.bodies) {
    json jbody;
    jbody["id"] = body.id;
    jbody["origin"] = to_json_vec(body.box.origin);
    jbody["size"] = to_json_vec(body.box.size);
    jbody["material"] = {{"name", body.material.name},
                         {"density", body.material.density},
                         {"specific_heat", body.material.specific_heat},
                         {"conductivity", body.material.conductivity}};
    jbody["power"] = json::array();
    for (const auto& seg : body.power.segments)
      jbody["power"].push_back({{"start_time", seg.start_time}, {"watts", seg.watts}});
    if (body.probe) jbody["probe"] = to_json_vec(*body.probe);
    doc["bodies"].push_back(std::move(jbody));
  }
  return doc.dump(2);
}

}  // namespace thermrom
