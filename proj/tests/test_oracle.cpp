#include <doctest.h>

#include <cmath>
#include <random>

#include "thermrom/errors.hpp"
#include "thermrom/oracle.hpp"

using namespace thermrom;

namespace {

const Material kSilver{"silver", 10500, 235, 429};
const Material kFr4{"fr4", 1850, 1100, 0.3};

BodySpec cube(const std::string& id, Vec3 origin, double side, const Material& m,
              double watts = 0.0) {
  BodySpec body;
  body.id = id;
  body.box = {origin, {side, side, side}};
  body.material = m;
  if (watts != 0.0) body.power = PowerProfile::constant(watts);
  return body;
}

}  // namespace

TEST_CASE("build_grid paints bodies onto cells") {
  SystemConfig system{{cube("c", {0, 0, 0}, 0.02, kSilver, 1.0)}, {}, 20.0};
  const auto grid = build_grid(system, 0.005);
  CHECK(grid.nx() == 4);
  CHECK(grid.ny() == 4);
  CHECK(grid.nz() == 4);
  CHECK(grid.n_solid_cells() == 64);

  SUBCASE("touching cubes leave no gap") {
    SystemConfig two{{cube("a", {0, 0, 0}, 0.02, kSilver, 1.0),
                      cube("b", {0.02, 0, 0}, 0.02, kFr4)},
                     {},
                     20.0};
    const auto g = build_grid(two, 0.005);
    CHECK(g.n_solid_cells() == 128);
    CHECK(g.n_cells() == 128);  // bounding box is exactly the two cubes
  }
  SUBCASE("misaligned body is rejected") {
    SystemConfig bad{{cube("c", {0, 0, 0}, 0.021, kSilver, 1.0)}, {}, 20.0};
    CHECK_THROWS_AS(build_grid(bad, 0.005), GeometryUnresolvable);
  }
  SUBCASE("body thinner than 2 cells is rejected") {
    SystemConfig thin{{cube("c", {0, 0, 0}, 0.005, kSilver, 1.0)}, {}, 20.0};
    CHECK_THROWS_AS(build_grid(thin, 0.005), GeometryUnresolvable);
  }
}

TEST_CASE("stable_dt follows the explicit stability formula") {
  SystemConfig system{{cube("c", {0, 0, 0}, 0.02, kSilver, 1.0)}, {}, 20.0};
  const double dx = 0.005;
  const auto grid = build_grid(system, dx);
  const double alpha = kSilver.diffusivity();
  CHECK(grid.stable_dt() == doctest::Approx(0.9 * dx * dx / (6.0 * alpha)).epsilon(1e-12));

  SUBCASE("halving dx quarters stable_dt") {
    const auto fine = build_grid(system, dx / 2.0);
    CHECK(fine.stable_dt() == doctest::Approx(grid.stable_dt() / 4.0).epsilon(1e-12));
  }
  SUBCASE("mixed grid is governed by the high-diffusivity cells") {
    SystemConfig mixed{{cube("ag", {0, 0, 0}, 0.02, kSilver, 1.0),
                        cube("fr4", {0.02, 0, 0}, 0.02, kFr4)},
                       {},
                       20.0};
    const auto g = build_grid(mixed, dx);
    // silver cells see a silver-silver face with k = 429, the binding limit
    const double dt_silver = 0.9 * kSilver.volumetric_capacity() * dx * dx /
                             (2.0 * 3.0 * kSilver.conductivity);
    CHECK(g.stable_dt() == doctest::Approx(dt_silver).epsilon(1e-12));
  }
}

TEST_CASE("step: uniform insulated field with no power stays put") {
  SystemConfig system{{cube("c", {0, 0, 0}, 0.02, kSilver)}, {}, 20.0};
  auto grid = build_grid(system, 0.005);
  for (int i = 0; i < 10; ++i) grid.step(grid.stable_dt());
  for (std::size_t c = 0; c < grid.n_cells(); ++c)
    if (grid.body_at(c) >= 0) CHECK(grid.temperature(c) == doctest::Approx(20.0).epsilon(1e-15));
}

TEST_CASE("step rejects dt above the stability limit") {
  SystemConfig system{{cube("c", {0, 0, 0}, 0.02, kSilver, 1.0)}, {}, 20.0};
  auto grid = build_grid(system, 0.005);
  CHECK_THROWS_AS(grid.step(grid.stable_dt() * 1.5), StabilityViolation);
}

TEST_CASE("step: constant power raises the mean by exactly P*n*dt/C") {
  auto body = cube("c", {0, 0, 0}, 0.02, kFr4, 3.0);
  SystemConfig system{{body}, {}, 20.0};
  auto grid = build_grid(system, 0.005);
  const double capacitance = body.capacitance();
  const double dt = grid.stable_dt();
  const int n = 50;
  for (int i = 0; i < n; ++i) grid.step(dt);
  CHECK(grid.mean_temperature() ==
        doctest::Approx(20.0 + 3.0 * n * dt / capacitance).epsilon(1e-12));
}

TEST_CASE("step: a hot/cold split moves equal energy both ways") {
  SystemConfig system{{cube("c", {0, 0, 0}, 0.02, kSilver)}, {}, 0.0};
  auto grid = build_grid(system, 0.01);  // 2x2x2
  // x < 0.01 at 100, x >= 0.01 at 0
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j) grid.set_temperature(grid.cell_index(0, j, k), 100.0);

  const double dt = grid.stable_dt();
  const double dx = grid.dx();
  grid.step(dt);

  // hand-computed Euler step: only the hot/cold face flux is nonzero
  const double expected_drop =
      dt * kSilver.conductivity * 100.0 / (kSilver.volumetric_capacity() * dx * dx);
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j) {
      CHECK(grid.temperature(grid.cell_index(0, j, k)) ==
            doctest::Approx(100.0 - expected_drop).epsilon(1e-12));
      CHECK(grid.temperature(grid.cell_index(1, j, k)) ==
            doctest::Approx(expected_drop).epsilon(1e-12));
    }
}

TEST_CASE("maximum principle with zero sources") {
  SystemConfig system{{cube("c", {0, 0, 0}, 0.02, kFr4)}, {}, 0.0};
  auto grid = build_grid(system, 0.005);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> temp(-30.0, 80.0);
  double lo = 1e300, hi = -1e300;
  for (std::size_t c = 0; c < grid.n_cells(); ++c)
    if (grid.body_at(c) >= 0) {
      const double t = temp(rng);
      grid.set_temperature(c, t);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  for (int i = 0; i < 200; ++i) grid.step(grid.stable_dt());
  for (std::size_t c = 0; c < grid.n_cells(); ++c)
    if (grid.body_at(c) >= 0) {
      CHECK(grid.temperature(c) >= lo - 1e-9);
      CHECK(grid.temperature(c) <= hi + 1e-9);
    }
}

TEST_CASE("simulate: zero power gives a flat trace at T0") {
  SystemConfig system{{cube("c", {0, 0, 0}, 0.02, kSilver)}, {}, 25.0};
  const auto trace = simulate(system, 2.0, 0.005, 0.5);
  CHECK(trace.n_samples() == 5);
  for (double v : trace.values[0]) CHECK(v == doctest::Approx(25.0).epsilon(1e-15));
}

TEST_CASE("simulate: 1-body insulated follows P*t/C") {
  // C = 1000 * 50 * 0.001 = 50 J/K, P = 1 W, 100 s -> +2 K
  BodySpec body;
  body.id = "b";
  body.box = {{0, 0, 0}, {0.1, 0.1, 0.1}};
  body.material = {"m", 1000, 50, 400};
  body.power = PowerProfile::constant(1.0);
  SystemConfig system{{body}, {}, 20.0};
  const auto trace = simulate(system, 100.0, 0.025, 10.0);
  CHECK(trace.times.front() == 0.0);
  CHECK(trace.values[0].front() == 20.0);
  CHECK(trace.values[0].back() == doctest::Approx(22.0).epsilon(1e-3));
}

TEST_CASE("energy conservation for insulated transient runs") {
  auto a = cube("a", {0, 0, 0}, 0.02, kSilver, 0.0);
  a.power = PowerProfile{{{0, 2.0}, {1.0, 0.5}, {2.5, 0.0}, {3.0, 1.0}}};
  auto b = cube("b", {0.02, 0, 0}, 0.02, kFr4);
  SystemConfig system{{a, b}, {}, 20.0};

  auto grid = build_grid(system, 0.005);
  const double energy_before = grid.thermal_energy();
  // replay the same stepping scheme simulate() uses, to t = 4 s
  const auto trace = simulate(system, 4.0, 0.005, 0.5);
  (void)trace;

  auto grid2 = build_grid(system, 0.005);
  const double dt_max = grid2.stable_dt();
  double t = 0.0;
  const std::vector<double> knots{1.0, 2.5, 3.0, 4.0};
  for (double knot : knots) {
    const int n = static_cast<int>(std::ceil((knot - t) / dt_max));
    const double dt = (knot - t) / n;
    for (int i = 0; i < n; ++i) grid2.step(dt, t + i * dt);
    t = knot;
  }
  const double injected = a.power.integral(4.0);
  const double delta = grid2.thermal_energy() - energy_before;
  CHECK(std::abs(delta - injected) / injected < 1e-6);
  CHECK(grid2.injected_energy() == doctest::Approx(injected).epsilon(1e-9));
}

TEST_CASE("mirror-symmetric configs heat symmetrically") {
  auto a = cube("a", {0, 0, 0}, 0.02, kSilver, 1.0);
  auto b = cube("b", {0.02, 0, 0}, 0.02, kSilver, 1.0);
  SystemConfig system{{a, b}, {}, 20.0};
  const auto trace = simulate(system, 5.0, 0.005, 1.0);
  for (std::size_t s = 0; s < trace.n_samples(); ++s)
    CHECK(std::abs(trace.values[0][s] - trace.values[1][s]) < 1e-9);
}

TEST_CASE("oracle traces superpose") {
  auto a = cube("a", {0, 0, 0}, 0.02, kSilver);
  auto b = cube("b", {0.02, 0, 0}, 0.02, kFr4);
  const double t0 = 20.0;

  auto with_powers = [&](double pa, double pb) {
    auto sa = a, sb = b;
    if (pa != 0.0) sa.power = PowerProfile::constant(pa);
    if (pb != 0.0) sb.power = PowerProfile::constant(pb);
    SystemConfig system{{sa, sb}, {}, t0};
    return simulate(system, 5.0, 0.005, 1.0);
  };

  const auto t1 = with_powers(2.0, 0.0);
  const auto t2 = with_powers(0.0, 3.0);
  const auto tsum = with_powers(2.0, 3.0);
  for (std::size_t body = 0; body < 2; ++body)
    for (std::size_t s = 0; s < tsum.n_samples(); ++s) {
      const double expected = t1.values[body][s] + t2.values[body][s] - t0;
      CHECK(tsum.values[body][s] == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("convection boundary cools toward ambient") {
  auto body = cube("c", {0, 0, 0}, 0.02, kSilver);
  SystemConfig system{{body}, {BoundaryKind::Convection, 50.0, 20.0, 0.0}, 80.0};
  const auto trace = simulate(system, 60.0, 0.005, 10.0);
  const auto& v = trace.values[0];
  for (std::size_t s = 1; s < v.size(); ++s) CHECK(v[s] < v[s - 1]);
  CHECK(v.back() > 20.0);

  // lumped-body decay: T = Tamb + (T0 - Tamb) e^{-hA t / C}
  const double area = 6.0 * 0.02 * 0.02;
  const double tau = body.capacitance() / (50.0 * area);
  const double expected = 20.0 + 60.0 * std::exp(-60.0 / tau);
  CHECK(v.back() == doctest::Approx(expected).epsilon(5e-3));
}

TEST_CASE("probe reads the cell containing the probe point") {
  auto a = cube("a", {0, 0, 0}, 0.02, kSilver, 1.0);
  a.probe = Vec3{0.001, 0.001, 0.001};  // corner cell
  SystemConfig system{{a}, {}, 20.0};
  const auto grid = build_grid(system, 0.005);
  CHECK(grid.cell_containing(*a.probe) == grid.cell_index(0, 0, 0));
}
