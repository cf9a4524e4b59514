#include "thermrom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "thermrom/errors.hpp"

namespace thermrom {

namespace {

constexpr double kAlignTol = 0.01;  // fraction of dx

// Nearest cell count for a length; throws if the length is not a near-integer
// multiple of dx.
int snap_cells(double length, double dx, const std::string& what) {
  const double cells = length / dx;
  const int n = static_cast<int>(std::llround(cells));
  if (std::abs(cells - n) > kAlignTol)
    throw GeometryUnresolvable(what + " is not aligned to dx (" + std::to_string(length) +
                               " vs dx = " + std::to_string(dx) + ")");
  return n;
}

}  // namespace

VoxelGrid::VoxelGrid(const SystemConfig& system, double dx) : system_(&system), dx_(dx) {
  if (!(dx > 0.0)) throw GeometryUnresolvable("dx must be > 0");
  validate(system);

  Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
          std::numeric_limits<double>::max()};
  Vec3 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest(),
          std::numeric_limits<double>::lowest()};
  for (const auto& body : system.bodies)
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], body.box.origin[a]);
      hi[a] = std::max(hi[a], body.box.origin[a] + body.box.size[a]);
    }
  grid_origin_ = lo;
  nx_ = snap_cells(hi[0] - lo[0], dx, "grid x extent");
  ny_ = snap_cells(hi[1] - lo[1], dx, "grid y extent");
  nz_ = snap_cells(hi[2] - lo[2], dx, "grid z extent");

  cells_.assign(static_cast<std::size_t>(nx_) * ny_ * nz_, -1);
  paint_bodies(system);

  temp_.assign(cells_.size(), system.initial_temperature);
  temp_next_ = temp_;
  stable_dt_ = compute_stable_dt();
}

void VoxelGrid::paint_bodies(const SystemConfig& system) {
  body_cell_count_.assign(system.bodies.size(), 0);
  rho_cp_.resize(system.bodies.size());
  k_.resize(system.bodies.size());
  for (std::size_t b = 0; b < system.bodies.size(); ++b) {
    const auto& body = system.bodies[b];
    rho_cp_[b] = body.material.volumetric_capacity();
    k_[b] = body.material.conductivity;

    int i0[3], i1[3];
    for (int a = 0; a < 3; ++a) {
      const double off = body.box.origin[a] - grid_origin_[a];
      const int start = static_cast<int>(std::llround(off / dx_));
      if (std::abs(off / dx_ - start) > kAlignTol)
        throw GeometryUnresolvable("body '" + body.id + "' origin is not aligned to dx");
      const int span = snap_cells(body.box.size[a], dx_, "body '" + body.id + "' size");
      if (span < 2)
        throw GeometryUnresolvable("body '" + body.id + "' spans fewer than 2 cells on an axis");
      i0[a] = start;
      i1[a] = start + span;
    }
    for (int k = i0[2]; k < i1[2]; ++k)
      for (int j = i0[1]; j < i1[1]; ++j)
        for (int i = i0[0]; i < i1[0]; ++i) {
          const std::size_t idx = cell_index(i, j, k);
          if (cells_[idx] != -1)
            throw GeometryUnresolvable("bodies overlap on the grid at cell " +
                                       std::to_string(idx));
          cells_[idx] = static_cast<int16_t>(b);
          ++body_cell_count_[b];
        }
  }
  for (std::size_t idx = 0; idx < cells_.size(); ++idx)
    if (cells_[idx] >= 0) solid_cells_.push_back(idx);
  source_density_.assign(system.bodies.size(), 0.0);
}

std::size_t VoxelGrid::cell_containing(const Vec3& p) const {
  int ijk[3];
  for (int a = 0; a < 3; ++a) {
    const int n = (a == 0) ? nx_ : (a == 1) ? ny_ : nz_;
    int c = static_cast<int>(std::floor((p[a] - grid_origin_[a]) / dx_));
    c = std::clamp(c, 0, n - 1);
    ijk[a] = c;
  }
  const std::size_t idx = cell_index(ijk[0], ijk[1], ijk[2]);
  if (cells_[idx] < 0) throw GeometryUnresolvable("probe point lies in a void cell");
  return idx;
}

double VoxelGrid::body_mean_temperature(int body) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t idx : solid_cells_)
    if (cells_[idx] == body) {
      sum += temp_[idx];
      ++count;
    }
  return sum / static_cast<double>(count);
}

double VoxelGrid::mean_temperature() const {
  double e = 0.0, c = 0.0;
  for (std::size_t idx : solid_cells_) {
    const double cap = rho_cp_[cells_[idx]];
    e += cap * temp_[idx];
    c += cap;
  }
  return e / c;
}

double VoxelGrid::thermal_energy() const {
  const double cell_volume = dx_ * dx_ * dx_;
  double e = 0.0;
  for (std::size_t idx : solid_cells_) e += rho_cp_[cells_[idx]] * cell_volume * temp_[idx];
  return e;
}

double VoxelGrid::exposed_area() const { return exposed_area(-1); }

double VoxelGrid::exposed_area(int body) const {
  const int dirs[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  std::size_t faces = 0;
  for (std::size_t idx : solid_cells_) {
    if (body >= 0 && cells_[idx] != body) continue;
    const int i = static_cast<int>(idx % nx_);
    const int j = static_cast<int>((idx / nx_) % ny_);
    const int k = static_cast<int>(idx / (static_cast<std::size_t>(nx_) * ny_));
    for (const auto& d : dirs) {
      const int ni = i + d[0], nj = j + d[1], nk = k + d[2];
      if (ni < 0 || ni >= nx_ || nj < 0 || nj >= ny_ || nk < 0 || nk >= nz_ ||
          cells_[cell_index(ni, nj, nk)] < 0)
        ++faces;
    }
  }
  return static_cast<double>(faces) * dx_ * dx_;
}

double VoxelGrid::compute_stable_dt() const {
  const bool convection = system_->boundary.kind == BoundaryKind::Convection;
  const double h = system_->boundary.h;
  const int active_dims = (nx_ > 1 ? 1 : 0) + (ny_ > 1 ? 1 : 0) + (nz_ > 1 ? 1 : 0);
  const int D = std::max(active_dims, 1);
  const int dirs[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

  double dt_min = std::numeric_limits<double>::max();
  for (std::size_t idx : solid_cells_) {
    const int b = cells_[idx];
    const int i = static_cast<int>(idx % nx_);
    const int j = static_cast<int>((idx / nx_) % ny_);
    const int k = static_cast<int>(idx / (static_cast<std::size_t>(nx_) * ny_));
    double k_max_face = 0.0;
    for (const auto& d : dirs) {
      const int ni = i + d[0], nj = j + d[1], nk = k + d[2];
      const bool outside =
          ni < 0 || ni >= nx_ || nj < 0 || nj >= ny_ || nk < 0 || nk >= nz_;
      const int nb = outside ? -1 : cells_[cell_index(ni, nj, nk)];
      if (nb >= 0) {
        const double kf = 2.0 * k_[b] * k_[nb] / (k_[b] + k_[nb]);
        k_max_face = std::max(k_max_face, kf);
      } else if (convection) {
        k_max_face = std::max(k_max_face, h * dx_);
      }
    }
    if (k_max_face > 0.0)
      dt_min = std::min(dt_min, rho_cp_[b] * dx_ * dx_ / (2.0 * D * k_max_face));
  }
  if (dt_min == std::numeric_limits<double>::max()) return 1.0;  // fully decoupled grid
  return 0.9 * dt_min;
}

double VoxelGrid::stable_dt() const { return stable_dt_; }

void VoxelGrid::refresh_sources(double t) {
  if (t == sources_time_) return;
  const double cell_volume = dx_ * dx_ * dx_;
  for (std::size_t b = 0; b < source_density_.size(); ++b) {
    const double watts = system_->bodies[b].power.at(t);
    source_density_[b] = watts / (static_cast<double>(body_cell_count_[b]) * cell_volume);
  }
  sources_time_ = t;
}

void VoxelGrid::step(double dt) { step(dt, time_); }

void VoxelGrid::step(double dt, double t_start) {
  if (dt > stable_dt_ * (1.0 + 1e-12))
    throw StabilityViolation("dt = " + std::to_string(dt) + " exceeds stable_dt = " +
                             std::to_string(stable_dt_));
  refresh_sources(t_start);

  const bool convection = system_->boundary.kind == BoundaryKind::Convection;
  const double h = system_->boundary.h;
  const double t_ambient = system_->boundary.ambient;
  const double inv_dx2 = 1.0 / (dx_ * dx_);
  const int dirs[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

  const std::int64_t n = static_cast<std::int64_t>(solid_cells_.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::int64_t s = 0; s < n; ++s) {
    const std::size_t idx = solid_cells_[s];
    const int b = cells_[idx];
    const int i = static_cast<int>(idx % nx_);
    const int j = static_cast<int>((idx / nx_) % ny_);
    const int k = static_cast<int>(idx / (static_cast<std::size_t>(nx_) * ny_));
    const double t_cell = temp_[idx];

    double flux = 0.0;  // W/m^3 equivalent accumulator (divided by dx^2 below)
    for (const auto& d : dirs) {
      const int ni = i + d[0], nj = j + d[1], nk = k + d[2];
      const bool outside =
          ni < 0 || ni >= nx_ || nj < 0 || nj >= ny_ || nk < 0 || nk >= nz_;
      const int nb = outside ? -1 : cells_[cell_index(ni, nj, nk)];
      if (nb >= 0) {
        const std::size_t nidx = cell_index(ni, nj, nk);
        const double kf = 2.0 * k_[b] * k_[nb] / (k_[b] + k_[nb]);
        flux += kf * (temp_[nidx] - t_cell);
      } else if (convection) {
        flux += h * dx_ * (t_ambient - t_cell);
      }
    }
    temp_next_[idx] =
        t_cell + dt * (flux * inv_dx2 + source_density_[b]) / rho_cp_[b];
  }
  temp_.swap(temp_next_);

  double total_power = 0.0;
  for (std::size_t b = 0; b < source_density_.size(); ++b)
    total_power += source_density_[b] * static_cast<double>(body_cell_count_[b]) * dx_ * dx_ * dx_;
  injected_energy_ += total_power * dt;
  time_ = t_start + dt;
}

VoxelGrid build_grid(const SystemConfig& system, double dx) { return VoxelGrid(system, dx); }

TemperatureTrace simulate(const SystemConfig& system, double duration, double dx,
                          double sample_dt) {
  if (duration < 0.0) throw ConfigError("simulate: duration must be >= 0");
  if (!(sample_dt > 0.0)) throw ConfigError("simulate: sample_dt must be > 0");

  VoxelGrid grid(system, dx);
  const double dt_max = grid.stable_dt();

  std::vector<std::size_t> probe_cells;
  for (const auto& body : system.bodies)
    probe_cells.push_back(grid.cell_containing(body.probe_point()));

  // Power transients must land on step boundaries so the discrete source
  // integral matches the schedule exactly.
  std::set<double> transient_times;
  for (const auto& body : system.bodies)
    for (const auto& seg : body.power.segments)
      if (seg.start_time > 0.0 && seg.start_time < duration)
        transient_times.insert(seg.start_time);

  TemperatureTrace trace;
  for (const auto& body : system.bodies) trace.ids.push_back(body.id);
  trace.values.assign(system.bodies.size(), {});

  auto record = [&](double t) {
    trace.times.push_back(t);
    for (std::size_t b = 0; b < probe_cells.size(); ++b)
      trace.values[b].push_back(grid.temperature(probe_cells[b]));
  };
  record(0.0);

  const std::size_t n_samples = static_cast<std::size_t>(std::llround(duration / sample_dt));
  double t_prev = 0.0;
  for (std::size_t s = 1; s <= n_samples; ++s) {
    const double t_sample = static_cast<double>(s) * sample_dt;
    // split at transients inside (t_prev, t_sample)
    std::vector<double> knots;
    for (double tt : transient_times)
      if (tt > t_prev && tt < t_sample) knots.push_back(tt);
    knots.push_back(t_sample);
    for (double t_target : knots) {
      const double span = t_target - t_prev;
      const int n_steps = std::max(1, static_cast<int>(std::ceil(span / dt_max - 1e-12)));
      const double dt = span / n_steps;
      for (int i = 0; i < n_steps; ++i) grid.step(dt, t_prev + i * dt);
      t_prev = t_target;
    }
    record(t_sample);
  }
  return trace;
}

}  // namespace thermrom
