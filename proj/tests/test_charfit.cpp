#include <doctest.h>

#include <cmath>
#include <vector>

#include "thermrom/charfit.hpp"
#include "thermrom/errors.hpp"
#include "thermrom/oracle.hpp"

using namespace thermrom;

namespace {

const Material kSilver{"silver", 10500, 235, 429};
const Material kBoard{"board", 1850, 1100, 1.0};

BodySpec cube(const std::string& id, Vec3 origin, double side, const Material& m,
              double watts = 0.0) {
  BodySpec body;
  body.id = id;
  body.box = {origin, {side, side, side}};
  body.material = m;
  if (watts != 0.0) body.power = PowerProfile::constant(watts);
  return body;
}

struct Synthetic {
  std::vector<double> times;
  std::vector<double> dev;
};

Synthetic synthetic_exponential(double amplitude, double rate, double t_end, double dt) {
  Synthetic s;
  for (double t = 0.0; t <= t_end + 1e-9; t += dt) {
    s.times.push_back(t);
    s.dev.push_back(amplitude * (1.0 - std::exp(-rate * t)));
  }
  return s;
}

}  // namespace

TEST_CASE("fit_exponential recovers synthetic parameters") {
  SUBCASE("positive branch") {
    const auto s = synthetic_exponential(5.0, 0.1, 60.0, 0.1);
    const auto fit = fit_exponential(s.times, s.dev);
    CHECK(fit.identifiable);
    CHECK(fit.converged);
    CHECK(std::abs(fit.amplitude - 5.0) < 1e-3);
    CHECK(std::abs(fit.rate - 0.1) < 1e-4);
  }
  SUBCASE("negative branch") {
    const auto s = synthetic_exponential(-2.0, 0.5, 30.0, 0.05);
    const auto fit = fit_exponential(s.times, s.dev);
    CHECK(std::abs(fit.amplitude + 2.0) < 1e-3);
    CHECK(std::abs(fit.rate - 0.5) < 1e-4);
  }
  SUBCASE("all-zero series is unidentifiable") {
    const std::vector<double> times{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const std::vector<double> dev(times.size(), 0.0);
    const auto fit = fit_exponential(times, dev);
    CHECK_FALSE(fit.identifiable);
    CHECK(fit.amplitude == 0.0);
  }
  SUBCASE("scale equivariance") {
    const auto s = synthetic_exponential(1.7, 0.23, 40.0, 0.1);
    auto scaled = s;
    for (double& v : scaled.dev) v *= 3.5;
    const auto fit = fit_exponential(s.times, s.dev);
    const auto fit_scaled = fit_exponential(scaled.times, scaled.dev);
    CHECK(fit_scaled.amplitude == doctest::Approx(3.5 * fit.amplitude).epsilon(1e-6));
    CHECK(fit_scaled.rate == doctest::Approx(fit.rate).epsilon(1e-6));
  }
  SUBCASE("too few samples rejected") {
    CHECK_THROWS_AS(fit_exponential({0, 1, 2}, {0, 1, 2}), ConfigError);
  }
}

TEST_CASE("run_unit_trials") {
  auto a = cube("a", {0, 0, 0}, 0.008, kSilver, 2.0);
  auto b = cube("b", {0.008, 0, 0}, 0.008, kBoard, 1.0);
  SystemConfig system{{a, b}, {}, 20.0};

  const auto trials = run_unit_trials(system, 10.0, 0.002);
  SUBCASE("one trial per source") {
    CHECK(trials.size() == 2);
    CHECK(trials[0].source_id == "a");
    CHECK(trials[1].source_id == "b");
  }
  SUBCASE("deviation starts at zero") {
    for (const auto& trial : trials)
      for (const auto& series : trial.deviation) CHECK(std::abs(series.front()) < 1e-12);
  }
  SUBCASE("source body sits above the linear curve, the sink below") {
    CHECK(trials[0].deviation[0].back() > 0.0);
    CHECK(trials[0].deviation[1].back() < 0.0);
    CHECK(trials[1].deviation[1].back() > 0.0);
    CHECK(trials[1].deviation[0].back() < 0.0);
  }
  SUBCASE("single insulated body deviates ~0 from its own linear curve") {
    SystemConfig solo{{cube("s", {0, 0, 0}, 0.008, kSilver, 1.0)}, {}, 20.0};
    const auto t = run_unit_trials(solo, 5.0, 0.002);
    REQUIRE(t.size() == 1);
    for (double v : t[0].deviation[0]) CHECK(std::abs(v) < 1e-6);
  }
}

TEST_CASE("resistance_from_trial") {
  auto make_trial = [](double amplitude, double rate, double t_m) {
    TrialResult trial;
    trial.source_id = "s";
    trial.body_ids = {"s"};
    trial.horizon = t_m;
    const auto s = synthetic_exponential(amplitude, rate, t_m, t_m / 200.0);
    trial.times = s.times;
    trial.deviation = {s.dev};
    return trial;
  };

  SUBCASE("unit power endpoint estimator") {
    const auto trial = make_trial(4.2, 1.0, 20.0);  // k t_m = 20, fully settled
    CHECK(resistance_from_trial(trial, 0, 1.0) == doctest::Approx(4.2).epsilon(1e-6));
    CHECK(resistance_from_trial(trial, 0, 2.0) == doctest::Approx(2.1).epsilon(1e-6));
  }
  SUBCASE("agrees with the fitted amplitude within 5% at k t_m >= 5") {
    const auto trial = make_trial(3.0, 0.25, 20.0);
    const auto fit = fit_exponential(trial.times, trial.deviation[0]);
    const double endpoint = resistance_from_trial(trial, 0, 1.0);
    CHECK(std::abs(endpoint - fit.amplitude) / std::abs(fit.amplitude) < 0.05);
  }
  SUBCASE("still-rising trial is rejected") {
    const auto trial = make_trial(3.0, 0.05, 20.0);  // k t_m = 1
    CHECK_THROWS_AS(resistance_from_trial(trial, 0, 1.0), NotStationary);
  }
}

TEST_CASE("characterize") {
  SUBCASE("2-body system yields a 2x2 resistance matrix") {
    auto a = cube("a", {0, 0, 0}, 0.008, kSilver, 2.0);
    auto b = cube("b", {0.008, 0, 0}, 0.008, kBoard, 1.0);
    SystemConfig system{{a, b}, {}, 20.0};
    const auto result = characterize(system, 10.0, 0.002);
    CHECK(result.model.n_bodies() == 2);
    CHECK(result.model.n_sources() == 2);
    CHECK(result.model.resistance[0][0] > 0.0);
    CHECK(result.model.resistance[1][0] < 0.0);
    CHECK(result.model.k[0] > 0.0);
    CHECK(result.model.k[1] > 0.0);
    CHECK(result.model.total_capacitance ==
          doctest::Approx(a.capacitance() + b.capacitance()).epsilon(1e-12));
  }
  SUBCASE("symmetric twins characterize symmetrically") {
    auto a = cube("a", {0, 0, 0}, 0.008, kBoard, 1.0);
    auto b = cube("b", {0.008, 0, 0}, 0.008, kBoard, 1.0);
    // probe cells mirrored about the contact plane (the default center
    // probe snaps to the +x cell on an even grid)
    a.probe = Vec3{0.005, 0.005, 0.005};
    b.probe = Vec3{0.011, 0.005, 0.005};
    SystemConfig system{{a, b}, {}, 20.0};
    const auto result = characterize(system, 30.0, 0.002);
    const auto& r = result.model.resistance;
    CHECK(r[0][0] == doctest::Approx(r[1][1]).epsilon(0.02));
    CHECK(r[0][1] == doctest::Approx(r[1][0]).epsilon(0.02));
  }
  SUBCASE("single insulated body has nothing to characterize") {
    SystemConfig solo{{cube("s", {0, 0, 0}, 0.008, kSilver, 1.0)}, {}, 20.0};
    const auto result = characterize(solo, 5.0, 0.002);
    CHECK(result.model.resistance.size() == 1);
    CHECK(result.model.resistance[0].size() == 1);
    CHECK(result.model.resistance[0][0] == 0.0);
    CHECK_FALSE(result.report.warnings.empty());
  }
  SUBCASE("unit-power scaling: 2 W trial amplitude is twice the 1 W resistance") {
    auto a = cube("a", {0, 0, 0}, 0.008, kSilver, 2.0);
    auto b = cube("b", {0.008, 0, 0}, 0.008, kBoard, 1.0);
    SystemConfig system{{a, b}, {}, 20.0};
    const auto result = characterize(system, 10.0, 0.002);

    SystemConfig doubled = system;
    doubled.bodies[0].power = PowerProfile::constant(2.0);
    doubled.bodies[1].power = PowerProfile{};
    const auto trace = simulate(doubled, 10.0, 0.002, 10.0 / 200.0);
    const double c_t = system.total_capacitance();
    std::vector<double> dev(trace.n_samples());
    for (std::size_t s = 0; s < trace.n_samples(); ++s)
      dev[s] = trace.values[0][s] - 20.0 - 2.0 * trace.times[s] / c_t;
    const auto fit = fit_exponential(trace.times, dev, c_t);
    CHECK(fit.amplitude / 2.0 ==
          doctest::Approx(result.model.resistance[0][0]).epsilon(0.01));
  }
}

TEST_CASE("fit_h recovers an imposed convection coefficient") {
  const Material bronze{"cu-bronze", 8800, 380, 50};
  auto body = cube("c", {0, 0, 0}, 0.005, bronze);
  SystemConfig system{{body}, {BoundaryKind::Convection, 56.19, 20.0, 0.0}, 20.0};

  const auto fit = fit_h(system, 0.5, 150.0, 0.00125);
  CHECK(fit.exposed_area == doctest::Approx(6.0 * 0.005 * 0.005).epsilon(1e-12));
  CHECK(std::abs(fit.h - 56.19) / 56.19 < 0.02);

  SUBCASE("insulated config is rejected") {
    SystemConfig insulated{{body}, {}, 20.0};
    CHECK_THROWS_AS(fit_h(insulated, 0.5, 10.0, 0.00125), ConfigError);
  }
}
