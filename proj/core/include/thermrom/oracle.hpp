#pragma once

#include <cstdint>
#include <vector>

#include "thermrom/system_config.hpp"
#include "thermrom/trace.hpp"

namespace thermrom {

/// Uniform voxel discretization of a SystemConfig. Cells are either solid
/// (body index >= 0) or void (-1). Void cells carry no state; under
/// Convection, solid faces exposed to void or to the domain boundary
/// exchange h*A*(T_ambient - T_cell).
class VoxelGrid {
 public:
  VoxelGrid(const SystemConfig& system, double dx);

  double dx() const { return dx_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  std::size_t n_cells() const { return cells_.size(); }
  std::size_t n_solid_cells() const { return solid_cells_.size(); }
  double time() const { return time_; }

  int body_at(std::size_t cell) const { return cells_[cell]; }
  double temperature(std::size_t cell) const { return temp_[cell]; }
  /// Override a cell's temperature (initial-condition setup).
  void set_temperature(std::size_t cell, double value) { temp_[cell] = value; }
  std::size_t cell_index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * ny_ + j) * nx_ + i;
  }

  /// Cell holding a point; throws GeometryUnresolvable if the point lies in void.
  std::size_t cell_containing(const Vec3& p) const;

  /// Capacitance-weighted mean temperature over one body's cells.
  double body_mean_temperature(int body) const;
  /// Capacitance-weighted mean over all solid cells.
  double mean_temperature() const;
  /// Total thermal energy relative to 0 degC: sum of C_cell * T_cell [J].
  double thermal_energy() const;
  /// Exposed solid surface area (faces adjacent to void or domain edge) [m^2].
  double exposed_area() const;
  /// Exposed area of one body only [m^2].
  double exposed_area(int body) const;

  /// Largest stable forward-Euler step: 0.9 * min over cells of
  /// rho*c_p*dx^2 / (2 * D * k_max_face), D = active spatial dimensions.
  double stable_dt() const;

  /// One forward-Euler update of length dt starting at the grid's current
  /// time. Sources are refreshed from the power schedules at that time.
  /// Throws StabilityViolation if dt exceeds stable_dt().
  void step(double dt);

  /// Same, with the start-of-step time given explicitly (avoids float
  /// drift against power transient times over long runs).
  void step(double dt, double t_start);

  /// Energy injected by sources so far [J] (exact discrete sum).
  double injected_energy() const { return injected_energy_; }

 private:
  const SystemConfig* system_;
  double dx_{};
  int nx_{}, ny_{}, nz_{};
  Vec3 grid_origin_{};
  std::vector<int16_t> cells_;           // body index or -1
  std::vector<double> temp_;
  std::vector<double> temp_next_;
  std::vector<double> source_density_;   // W/m^3, refreshed per step
  std::vector<std::size_t> solid_cells_;
  std::vector<std::size_t> body_cell_count_;
  std::vector<double> rho_cp_;           // per body
  std::vector<double> k_;                // per body
  double time_{0.0};
  double injected_energy_{0.0};
  double stable_dt_{0.0};
  double sources_time_{-1.0};

  void paint_bodies(const SystemConfig& system);
  void refresh_sources(double t);
  double compute_stable_dt() const;
};

/// Convenience builder mirroring the grid constructor.
VoxelGrid build_grid(const SystemConfig& system, double dx);

/// Run the solver to `duration`, recording each body's probe-cell
/// temperature every sample_dt. Sample 0 is (t=0, T0). Interior steps are
/// sized so samples and power transients land exactly on step boundaries.
TemperatureTrace simulate(const SystemConfig& system, double duration, double dx,
                          double sample_dt);

}  // namespace thermrom
