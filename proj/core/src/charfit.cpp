#include "thermrom/charfit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "thermrom/errors.hpp"
#include "thermrom/nelder_mead.hpp"
#include "thermrom/oracle.hpp"

namespace thermrom {

using nlohmann::json;

namespace {

constexpr double kFlatDeviation = 1e-9;     // K, below this a series is unidentifiable
constexpr double kTailSlopeTol = 0.05;      // relative, stationarity check

int thread_cap() {
  if (const char* env = std::getenv("THERMROM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 4;
}

std::vector<std::size_t> source_indices(const SystemConfig& system) {
  std::vector<std::size_t> sources;
  for (std::size_t b = 0; b < system.bodies.size(); ++b)
    if (!system.bodies[b].power.is_zero()) sources.push_back(b);
  return sources;
}

double sse_against_model(const std::vector<double>& times, const std::vector<double>& dev,
                         double amplitude, double rate) {
  double sse = 0.0;
  for (std::size_t s = 0; s < times.size(); ++s) {
    const double m = amplitude * (1.0 - std::exp(-rate * times[s]));
    const double r = dev[s] - m;
    sse += r * r;
  }
  return sse;
}

}  // namespace

std::vector<TrialResult> run_unit_trials(const SystemConfig& system, double t_m, double dx,
                                         double sample_dt) {
  validate(system);
  if (!(t_m > 0.0)) throw ConfigError("run_unit_trials: t_m must be > 0");
  const auto sources = source_indices(system);
  if (sources.empty())
    throw ConfigError("run_unit_trials: system has no source (no body with nonzero power)");
  if (sample_dt <= 0.0) sample_dt = t_m / 200.0;

  const double total_capacitance = system.total_capacitance();
  const double t0 = system.initial_temperature;

  auto run_one = [&](std::size_t source_body) {
    SystemConfig trial_system = system;
    for (auto& body : trial_system.bodies) body.power = PowerProfile{};
    trial_system.bodies[source_body].power = PowerProfile::constant(1.0);

    const TemperatureTrace trace = simulate(trial_system, t_m, dx, sample_dt);

    TrialResult result;
    result.source_id = system.bodies[source_body].id;
    result.times = trace.times;
    result.horizon = t_m;
    for (std::size_t b = 0; b < system.bodies.size(); ++b) {
      result.body_ids.push_back(system.bodies[b].id);
      std::vector<double> dev(trace.times.size());
      for (std::size_t s = 0; s < trace.times.size(); ++s)
        dev[s] = trace.values[b][s] - t0 - trace.times[s] / total_capacitance;
      result.deviation.push_back(std::move(dev));
    }
    return result;
  };

  std::vector<TrialResult> results(sources.size());
  const int cap = thread_cap();
  for (std::size_t begin = 0; begin < sources.size(); begin += cap) {
    const std::size_t end = std::min(sources.size(), begin + static_cast<std::size_t>(cap));
    std::vector<std::future<TrialResult>> batch;
    for (std::size_t i = begin; i < end; ++i)
      batch.push_back(std::async(std::launch::async, run_one, sources[i]));
    for (std::size_t i = begin; i < end; ++i) results[i] = batch[i - begin].get();
  }
  return results;
}

ExponentialFit fit_exponential(const std::vector<double>& times,
                               const std::vector<double>& deviation,
                               std::optional<double> total_capacitance) {
  if (times.size() != deviation.size() || times.size() < 10)
    throw ConfigError("fit_exponential: need >= 10 paired samples");

  ExponentialFit fit;
  const double t_m = times.back();
  const double dev_end = deviation.back();

  if (std::abs(dev_end) < kFlatDeviation) {
    fit.amplitude = 0.0;
    fit.rate = 0.0;
    fit.sse = sse_against_model(times, deviation, 0.0, 1.0);
    fit.rmse = std::sqrt(fit.sse / times.size());
    fit.identifiable = false;
    fit.converged = true;
    return fit;
  }

  const double a0 = dev_end;
  const double k0 = total_capacitance ? 1.0 / (std::abs(a0) * *total_capacitance) : 3.0 / t_m;

  auto objective = [&](const std::vector<double>& x) {
    if (x[1] <= 0.0) return 1e30 * (1.0 - x[1]);
    return sse_against_model(times, deviation, x[0], x[1]);
  };

  SimplexOptions opts;
  opts.tolerance = 1e-10;
  opts.max_iterations = 2000;
  SimplexResult best = nelder_mead(objective, {a0, k0}, opts);
  if (!best.converged) {
    // one restart from a perturbed simplex around the stalled point
    std::vector<double> x0 = best.x;
    x0[0] *= 1.05;
    x0[1] = std::max(x0[1] * 0.8, 1e-12);
    SimplexResult retry = nelder_mead(objective, x0, opts);
    retry.iterations += best.iterations;
    if (retry.fmin < best.fmin || retry.converged) best = retry;
    if (!best.converged)
      throw NoConvergence("fit_exponential: simplex stalled after restart budget");
  }

  fit.amplitude = best.x[0];
  fit.rate = best.x[1];
  fit.sse = best.fmin;
  fit.rmse = std::sqrt(best.fmin / times.size());
  fit.iterations = best.iterations;
  fit.converged = best.converged;
  return fit;
}

double resistance_from_trial(const TrialResult& trial, std::size_t body, double power_w) {
  const auto& dev = trial.deviation.at(body);
  const auto& times = trial.times;
  const double dev_end = dev.back();
  if (std::abs(dev_end) < kFlatDeviation) return 0.0;

  // tail slope over the last 10% of samples
  const std::size_t tail_start = std::max<std::size_t>(times.size() * 9 / 10, times.size() - 5);
  const std::size_t n_tail = times.size() - tail_start;
  double mean_t = 0.0, mean_d = 0.0;
  for (std::size_t s = tail_start; s < times.size(); ++s) {
    mean_t += times[s];
    mean_d += dev[s];
  }
  mean_t /= n_tail;
  mean_d /= n_tail;
  double stt = 0.0, std_ = 0.0;
  for (std::size_t s = tail_start; s < times.size(); ++s) {
    stt += (times[s] - mean_t) * (times[s] - mean_t);
    std_ += (times[s] - mean_t) * (dev[s] - mean_d);
  }
  const double slope = stt > 0.0 ? std_ / stt : 0.0;
  const double relative = std::abs(slope) * trial.horizon / std::abs(dev_end);
  if (relative > kTailSlopeTol)
    throw NotStationary("trial '" + trial.source_id + "' deviation still moving at t_m (" +
                        std::to_string(relative) + " relative tail slope)");
  return dev_end / power_w;
}

CharacterizationResult characterize(const SystemConfig& system, double t_m, double dx,
                                    double sample_dt) {
  const auto trials = run_unit_trials(system, t_m, dx, sample_dt);
  const double total_capacitance = system.total_capacitance();
  const std::size_t n_bodies = system.bodies.size();
  const std::size_t n_sources = trials.size();

  CharacterizationResult result;
  CharacterizedModel& model = result.model;
  for (const auto& body : system.bodies) model.body_ids.push_back(body.id);
  for (const auto& trial : trials) model.source_ids.push_back(trial.source_id);
  model.initial_temperature = system.initial_temperature;
  model.total_capacitance = total_capacitance;
  model.characterization_horizon = t_m;
  model.resistance.assign(n_bodies, std::vector<double>(n_sources, 0.0));

  std::vector<std::vector<ExponentialFit>> fits(n_bodies, std::vector<ExponentialFit>(n_sources));
  for (std::size_t s = 0; s < n_sources; ++s)
    for (std::size_t b = 0; b < n_bodies; ++b) {
      auto fit = fit_exponential(trials[s].times, trials[s].deviation[b], total_capacitance);
      model.resistance[b][s] = fit.amplitude;  // unit power: amplitude is the resistance
      result.report.entries.push_back({model.body_ids[b], model.source_ids[s], fit});
      fits[b][s] = std::move(fit);
    }

  model.k.assign(n_bodies, 0.0);
  for (std::size_t b = 0; b < n_bodies; ++b) {
    // own-source trial first, then the best-conditioned (largest |A|) trial
    std::size_t chosen = n_sources;
    for (std::size_t s = 0; s < n_sources; ++s)
      if (model.source_ids[s] == model.body_ids[b] && fits[b][s].identifiable) chosen = s;
    if (chosen == n_sources) {
      double best_amp = 0.0;
      for (std::size_t s = 0; s < n_sources; ++s)
        if (fits[b][s].identifiable && std::abs(fits[b][s].amplitude) > best_amp) {
          best_amp = std::abs(fits[b][s].amplitude);
          chosen = s;
        }
    }
    if (chosen == n_sources) {
      model.k[b] = 3.0 / t_m;
      result.report.warnings.push_back("body '" + model.body_ids[b] +
                                       "': no identifiable trial; nothing to characterize");
    } else {
      model.k[b] = fits[b][chosen].rate;
      for (std::size_t s = 0; s < n_sources; ++s) {
        if (s == chosen || !fits[b][s].identifiable) continue;
        const double rel = std::abs(fits[b][s].rate - model.k[b]) / model.k[b];
        if (rel > 0.20)
          result.report.warnings.push_back(
              "body '" + model.body_ids[b] + "': time constant from trial '" +
              model.source_ids[s] + "' disagrees by " + std::to_string(rel * 100.0) + "%");
      }
    }
  }
  return result;
}

ConvectionFit fit_h(const SystemConfig& system, double power_w, double duration, double dx,
                    double sample_dt) {
  validate(system);
  if (system.boundary.kind != BoundaryKind::Convection)
    throw ConfigError("fit_h: system must have a convection boundary");
  if (sample_dt <= 0.0) sample_dt = duration / 400.0;

  SystemConfig run_system = system;
  for (auto& body : run_system.bodies) body.power = PowerProfile{};
  run_system.bodies[0].power = PowerProfile::constant(power_w);

  const VoxelGrid grid(run_system, dx);
  const double area = grid.exposed_area();
  const TemperatureTrace trace = simulate(run_system, duration, dx, sample_dt);

  const double t0 = system.initial_temperature;
  const double total_capacitance = system.total_capacitance();
  const auto& times = trace.times;
  const auto& values = trace.values[0];

  auto objective = [&](const std::vector<double>& x) {
    const double r = x[0];
    if (r <= 0.0) return 1e30 * (1.0 - r);
    double sse = 0.0;
    for (std::size_t s = 0; s < times.size(); ++s) {
      const double m =
          t0 + power_w * r * (1.0 - std::exp(-times[s] / (r * total_capacitance)));
      const double e = values[s] - m;
      sse += e * e;
    }
    return sse;
  };

  const double rise = values.back() - t0;
  const double r0 = std::max(rise / power_w, 1e-6);
  SimplexOptions opts;
  opts.tolerance = 1e-12;
  opts.max_iterations = 2000;
  SimplexResult best = nelder_mead(objective, {r0}, opts);
  if (!best.converged) {
    SimplexResult retry = nelder_mead(objective, {best.x[0] * 1.1}, opts);
    if (retry.fmin < best.fmin || retry.converged) best = retry;
    if (!best.converged) throw NoConvergence("fit_h: simplex stalled after restart budget");
  }

  ConvectionFit fit;
  fit.resistance = best.x[0];
  fit.exposed_area = area;
  fit.h = 1.0 / (area * fit.resistance);
  fit.sse = best.fmin;
  return fit;
}

std::string FitReport::to_json() const {
  json doc;
  doc["entries"] = json::array();
  for (const auto& entry : entries) {
    doc["entries"].push_back({{"body_id", entry.body_id},
                              {"source_id", entry.source_id},
                              {"A", entry.fit.amplitude},
                              {"k", entry.fit.rate},
                              {"sse", entry.fit.sse},
                              {"rmse", entry.fit.rmse},
                              {"iterations", entry.fit.iterations},
                              {"converged", entry.fit.converged},
                              {"identifiable", entry.fit.identifiable}});
  }
  doc["warnings"] = warnings;
  return doc.dump(2);
}

}  // namespace thermrom
