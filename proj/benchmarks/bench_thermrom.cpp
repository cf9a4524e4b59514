#include <benchmark/benchmark.h>

#include <cmath>

#include "thermrom/charfit.hpp"
#include "thermrom/oracle.hpp"
#include "thermrom/rom.hpp"

namespace {

using namespace thermrom;

SystemConfig two_plate_system() {
  const Material silver{"silver", 10500, 235, 429};
  const Material board{"board", 1850, 1100, 1.0};
  BodySpec heater{"heater", {{0, 0, 0}, {0.02, 0.02, 0.002}}, silver,
                  PowerProfile::constant(2.0), {}};
  BodySpec sink{"sink", {{0, 0, 0.002}, {0.02, 0.02, 0.002}}, board, {}, {}};
  return SystemConfig{{heater, sink}, {}, 20.0};
}

void BM_OracleStep(benchmark::State& state) {
  const auto system = two_plate_system();
  VoxelGrid grid(system, 0.001);
  const double dt = grid.stable_dt();
  for (auto _ : state) grid.step(dt);
  state.SetItemsProcessed(state.iterations() * grid.n_solid_cells());
}
BENCHMARK(BM_OracleStep);

void BM_RomPredict(benchmark::State& state) {
  CharacterizedModel model;
  model.body_ids = {"heater", "sink"};
  model.source_ids = {"heater"};
  model.initial_temperature = 20.0;
  model.total_capacitance = 3.6;
  model.resistance = {{3.2}, {-3.9}};
  model.k = {0.4, 0.4};
  const std::vector<PowerProfile> schedule{
      PowerProfile{{{0, 2.0}, {30, 0.5}, {60, 3.0}, {90, 0.0}}}};
  std::vector<double> times;
  for (int i = 0; i <= 1200; ++i) times.push_back(i * 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(predict(model, schedule, times));
}
BENCHMARK(BM_RomPredict);

void BM_FitExponential(benchmark::State& state) {
  std::vector<double> times, dev;
  for (double t = 0.0; t <= 20.0; t += 0.1) {
    times.push_back(t);
    dev.push_back(3.4 * (1.0 - std::exp(-0.4 * t)));
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_exponential(times, dev));
}
BENCHMARK(BM_FitExponential);

}  // namespace

BENCHMARK_MAIN();
