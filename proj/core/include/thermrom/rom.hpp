#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "thermrom/power_profile.hpp"
#include "thermrom/trace.hpp"

namespace thermrom {

/// Reduced-order model parameters extracted by characterization.
/// resistance[i][s] is the characteristic resistance of body i per unit
/// power at source s; its sign encodes which side of the linear curve the
/// body sits on. k[i] is the per-body exponential rate.
struct CharacterizedModel {
  std::vector<std::string> body_ids;
  std::vector<std::string> source_ids;
  double initial_temperature{};            // degC
  double total_capacitance{};              // J/K, includes any fluid term
  double characterization_horizon{};       // s (t_m)
  std::vector<std::vector<double>> resistance;  // K/W, |bodies| x |sources|
  std::vector<double> k;                   // 1/s, one per body

  std::size_t n_bodies() const { return body_ids.size(); }
  std::size_t n_sources() const { return source_ids.size(); }
};

void validate(const CharacterizedModel& model);

/// Compact JSON round trip; the model file is the ROM artifact.
CharacterizedModel load_model(const std::filesystem::path& path);
CharacterizedModel parse_model(const std::string& json_text);
std::string to_json(const CharacterizedModel& model);
void save_model(const CharacterizedModel& model, const std::filesystem::path& path);

/// Piecewise linear temperature curve T^L(t) relative to T0:
/// sum over transients j of (P_T,j - P_T,j-1)/C_T * (t - t_j-1).
/// `total_power` is the summed schedule of every source.
double linear_curve(const PowerProfile& total_power, double total_capacitance, double t);

/// Deviation for constant source powers:
/// sum_s P[s] * R[i][s] * (1 - e^{-k_i t}).
double deviation_constant(const CharacterizedModel& model, std::size_t body,
                          const std::vector<double>& source_powers, double t);

/// Piecewise deviation: every power transient contributes a delayed
/// exponential weighted by the step change in P.R. Collapses to
/// deviation_constant for single-segment schedules.
double deviation_piecewise(const CharacterizedModel& model, std::size_t body,
                           const std::vector<PowerProfile>& source_profiles, double t);

/// Full ROM prediction T_i(t) = T0 + T^L(t) + T^D_i(t) sampled at `times`.
/// `source_profiles` are ordered as model.source_ids.
TemperatureTrace predict(const CharacterizedModel& model,
                         const std::vector<PowerProfile>& source_profiles,
                         const std::vector<double>& times);

/// Single solid body in a fluid: T(t) = T0 + P*R*(1 - e^{-t/(R C_T)}) with
/// R = 1/(h A).
double convection_single_body(double initial_temperature, double power_w, double h,
                              double area, double total_capacitance, double t);

/// Steady-state form without the linear term:
/// T(t) = T0 + sum_s P[s]*R[s]*(1 - e^{-k[s] t}).
double steady_state_model(double initial_temperature, const std::vector<double>& source_powers,
                          const std::vector<double>& resistance_row,
                          const std::vector<double>& k_row, double t);

/// Conduction resistance |x - x_ref| / (K * A_cross) between a body center
/// and the linear-curve reference location.
double analytical_resistance(double body_center, double reference_point,
                             double conductivity, double cross_section);

struct LinearMap {
  double slope{};
  double intercept{};
  double r_squared{};
};

/// OLS fit of fitted-vs-calculated resistances. Throws DegenerateInput when
/// the calculated values have no spread.
LinearMap resistance_linear_map(const std::vector<double>& fitted,
                                const std::vector<double>& calculated);

}  // namespace thermrom
