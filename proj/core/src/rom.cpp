#include "thermrom/rom.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "thermrom/errors.hpp"

namespace thermrom {

using nlohmann::json;

void validate(const CharacterizedModel& model) {
  if (model.body_ids.empty()) throw ConfigError("model: no bodies");
  if (model.resistance.size() != model.body_ids.size())
    throw ConfigError("model: resistance matrix must have one row per body");
  for (const auto& row : model.resistance) {
    if (row.size() != model.source_ids.size())
      throw ConfigError("model: resistance rows must have one entry per source");
    for (double r : row)
      if (!std::isfinite(r)) throw ConfigError("model: resistance entries must be finite");
  }
  if (model.k.size() != model.body_ids.size())
    throw ConfigError("model: one time constant per body required");
  for (double kk : model.k)
    if (!(kk > 0.0)) throw ConfigError("model: time constants must be > 0");
  if (!(model.total_capacitance > 0.0)) throw ConfigError("model: total_capacitance must be > 0");
}

double linear_curve(const PowerProfile& total_power, double total_capacitance, double t) {
  double value = 0.0;
  double prev_watts = 0.0;
  for (const auto& seg : total_power.segments) {
    if (seg.start_time > t) break;
    value += (seg.watts - prev_watts) / total_capacitance * (t - seg.start_time);
    prev_watts = seg.watts;
  }
  return value;
}

double deviation_constant(const CharacterizedModel& model, std::size_t body,
                          const std::vector<double>& source_powers, double t) {
  const double decay = 1.0 - std::exp(-model.k[body] * t);
  double dev = 0.0;
  for (std::size_t s = 0; s < source_powers.size(); ++s)
    dev += source_powers[s] * model.resistance[body][s];
  return dev * decay;
}

double deviation_piecewise(const CharacterizedModel& model, std::size_t body,
                           const std::vector<PowerProfile>& source_profiles, double t) {
  std::set<double> transients{0.0};
  for (const auto& p : source_profiles)
    for (const auto& seg : p.segments) transients.insert(seg.start_time);

  const double k = model.k[body];
  double dev = 0.0;
  std::vector<double> prev_powers(source_profiles.size(), 0.0);
  for (double tj : transients) {
    if (tj > t) break;
    double weighted_step = 0.0;
    for (std::size_t s = 0; s < source_profiles.size(); ++s) {
      const double p = source_profiles[s].at(tj);
      weighted_step += (p - prev_powers[s]) * model.resistance[body][s];
      prev_powers[s] = p;
    }
    dev += weighted_step * (1.0 - std::exp(-k * (t - tj)));
  }
  return dev;
}

TemperatureTrace predict(const CharacterizedModel& model,
                         const std::vector<PowerProfile>& source_profiles,
                         const std::vector<double>& times) {
  if (source_profiles.size() != model.n_sources())
    throw IdMismatch("predict: schedule must provide one profile per model source");

  const PowerProfile total = sum_profiles(source_profiles);

  TemperatureTrace trace;
  trace.times = times;
  trace.ids = model.body_ids;
  trace.values.assign(model.n_bodies(), std::vector<double>(times.size()));
  for (std::size_t i = 0; i < model.n_bodies(); ++i)
    for (std::size_t s = 0; s < times.size(); ++s) {
      const double t = times[s];
      trace.values[i][s] = model.initial_temperature +
                           linear_curve(total, model.total_capacitance, t) +
                           deviation_piecewise(model, i, source_profiles, t);
    }
  return trace;
}

double convection_single_body(double initial_temperature, double power_w, double h, double area,
                              double total_capacitance, double t) {
  const double resistance = 1.0 / (h * area);
  return initial_temperature +
         power_w * resistance * (1.0 - std::exp(-t / (resistance * total_capacitance)));
}

double steady_state_model(double initial_temperature, const std::vector<double>& source_powers,
                          const std::vector<double>& resistance_row,
                          const std::vector<double>& k_row, double t) {
  double temperature = initial_temperature;
  for (std::size_t s = 0; s < source_powers.size(); ++s)
    temperature += source_powers[s] * resistance_row[s] * (1.0 - std::exp(-k_row[s] * t));
  return temperature;
}

double analytical_resistance(double body_center, double reference_point, double conductivity,
                             double cross_section) {
  return std::abs(body_center - reference_point) / (conductivity * cross_section);
}

LinearMap resistance_linear_map(const std::vector<double>& fitted,
                                const std::vector<double>& calculated) {
  const std::size_t n = fitted.size();
  if (n < 3 || calculated.size() != n)
    throw DegenerateInput("resistance_linear_map: need >= 3 paired points");

  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += calculated[i];
    mean_y += fitted[i];
  }
  mean_x /= n;
  mean_y /= n;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = calculated[i] - mean_x;
    const double dy = fitted[i] - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DegenerateInput("resistance_linear_map: calculated values have no spread");

  LinearMap map;
  map.slope = sxy / sxx;
  map.intercept = mean_y - map.slope * mean_x;
  map.r_squared = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
  return map;
}

CharacterizedModel parse_model(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("model: JSON parse error: ") + e.what());
  }
  CharacterizedModel model;
  try {
    model.body_ids = doc.at("body_ids").get<std::vector<std::string>>();
    model.source_ids = doc.at("source_ids").get<std::vector<std::string>>();
    model.initial_temperature = doc.at("initial_temperature").get<double>();
    model.total_capacitance = doc.at("total_capacitance").get<double>();
    model.characterization_horizon = doc.value("characterization_horizon", 0.0);
    model.resistance = doc.at("resistance").get<std::vector<std::vector<double>>>();
    model.k = doc.at("k").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  validate(model);
  return model;
}

CharacterizedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("model: cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string to_json(const CharacterizedModel& model) {
  json doc;
  doc["body_ids"] = model.body_ids;
  doc["source_ids"] = model.source_ids;
  doc["initial_temperature"] = model.initial_temperature;
  doc["total_capacitance"] = model.total_capacitance;
  doc["characterization_horizon"] = model.characterization_horizon;
  doc["resistance"] = model.resistance;
  doc["k"] = model.k;
  return doc.dump();
}

void save_model(const CharacterizedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("model: cannot open '" + path.string() + "' for writing");
  out << to_json(model) << '\n';
}

}  // namespace thermrom
