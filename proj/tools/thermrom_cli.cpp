// Command-line front end: oracle simulation, characterization, ROM
// prediction, trace comparison and convection h fitting.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "thermrom/charfit.hpp"
#include "thermrom/compare.hpp"
#include "thermrom/errors.hpp"
#include "thermrom/oracle.hpp"
#include "thermrom/rom.hpp"
#include "thermrom/system_config.hpp"
#include "thermrom/trace.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Schedule file: {"<source_id>": [{"start_time": s, "watts": W}, ...], ...}
std::vector<thermrom::PowerProfile> load_schedule(const std::string& path,
                                                  const std::vector<std::string>& source_ids) {
  std::ifstream in(path);
  if (!in) throw thermrom::ConfigError("schedule: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw thermrom::ConfigError(std::string("schedule: JSON parse error: ") + e.what());
  }

  std::vector<std::string> unmatched;
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (std::find(source_ids.begin(), source_ids.end(), it.key()) == source_ids.end())
      unmatched.push_back(it.key());
  if (!unmatched.empty()) {
    std::string msg = "schedule: ids not in model:";
    for (const auto& id : unmatched) msg += " '" + id + "'";
    throw thermrom::IdMismatch(msg);
  }

  std::vector<thermrom::PowerProfile> profiles(source_ids.size());
  for (std::size_t s = 0; s < source_ids.size(); ++s) {
    if (!doc.contains(source_ids[s])) continue;  // absent source stays at zero
    for (const auto& jseg : doc[source_ids[s]])
      profiles[s].segments.push_back(
          {jseg.at("start_time").get<double>(), jseg.at("watts").get<double>()});
    thermrom::validate(profiles[s]);
  }
  return profiles;
}

int run(int argc, char** argv) {
  CLI::App app{"thermrom - transient thermal reduced-order model pipeline"};
  app.require_subcommand(1);

  std::string config_path, model_path, schedule_path, out_path, trace_a_path, trace_b_path;
  std::string report_path;
  double duration = 120.0, dx = 0.001, sample_dt = 0.1, t_m = 20.0, power = 1.0;
  double reference_temperature = 20.0;
  double oracle_runtime = -1.0, rom_runtime = -1.0;

  auto* sim = app.add_subcommand("simulate", "Run the finite-difference oracle");
  sim->add_option("--config", config_path, "System config JSON")->required();
  sim->add_option("--duration", duration, "Simulated time [s]");
  sim->add_option("--dx", dx, "Grid spacing [m]");
  sim->add_option("--sample-dt", sample_dt, "Output sampling interval [s]");
  sim->add_option("--out", out_path, "Output trace CSV")->required();

  auto* chr = app.add_subcommand("characterize", "Extract ROM parameters from unit-power trials");
  chr->add_option("--config", config_path, "System config JSON")->required();
  chr->add_option("--tm", t_m, "Characterization horizon t_m [s]");
  chr->add_option("--dx", dx, "Grid spacing [m]");
  chr->add_option("--sample-dt", sample_dt, "Trial sampling interval [s] (0 = auto)");
  chr->add_option("--out", out_path, "Output model JSON")->required();
  chr->add_option("--report", report_path, "Fit report JSON");

  auto* prd = app.add_subcommand("predict", "Evaluate the ROM for a power schedule");
  prd->add_option("--model", model_path, "Characterized model JSON")->required();
  prd->add_option("--schedule", schedule_path, "Power schedule JSON")->required();
  prd->add_option("--duration", duration, "Prediction horizon [s]");
  prd->add_option("--sample-dt", sample_dt, "Output sampling interval [s]");
  prd->add_option("--out", out_path, "Output trace CSV")->required();

  auto* cmp = app.add_subcommand("compare", "Compare two traces on a rise basis");
  cmp->add_option("trace_a", trace_a_path, "Candidate trace CSV")->required();
  cmp->add_option("trace_b", trace_b_path, "Reference trace CSV")->required();
  cmp->add_option("--t0", reference_temperature, "Reference temperature for the rise basis");
  cmp->add_option("--oracle-runtime", oracle_runtime, "Oracle wall time [s] for the report");
  cmp->add_option("--rom-runtime", rom_runtime, "ROM wall time [s] for the report");
  cmp->add_option("--out", out_path, "Report JSON path");

  auto* fth = app.add_subcommand("fit-h", "Recover the convection coefficient from an oracle run");
  fth->add_option("--config", config_path, "System config JSON (convection boundary)")->required();
  fth->add_option("--power", power, "Constant source power [W]");
  fth->add_option("--duration", duration, "Simulated time [s]");
  fth->add_option("--dx", dx, "Grid spacing [m]");
  fth->add_option("--sample-dt", sample_dt, "Sampling interval [s] (0 = auto)");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) {
    const auto system = thermrom::load_system_config(config_path);
    const auto start = Clock::now();
    const auto trace = thermrom::simulate(system, duration, dx, sample_dt);
    const double elapsed = seconds_since(start);
    thermrom::write_csv(trace, out_path);
    std::cerr << "simulate: " << trace.n_samples() << " samples in " << elapsed << " s\n";
  } else if (chr->parsed()) {
    const auto system = thermrom::load_system_config(config_path);
    const double trial_dt = chr->count("--sample-dt") ? sample_dt : 0.0;
    const auto start = Clock::now();
    const auto result = thermrom::characterize(system, t_m, dx, trial_dt);
    const double elapsed = seconds_since(start);
    thermrom::save_model(result.model, out_path);
    if (!report_path.empty()) {
      std::ofstream report(report_path);
      report << result.report.to_json() << '\n';
    }
    std::cerr << "characterize: " << result.model.n_sources() << " trials in " << elapsed
              << " s\n";
    for (const auto& warning : result.report.warnings)
      std::cerr << "warning: " << warning << '\n';
  } else if (prd->parsed()) {
    const auto model = thermrom::load_model(model_path);
    const auto profiles = load_schedule(schedule_path, model.source_ids);
    std::vector<double> times;
    for (double t = 0.0; t <= duration + 1e-12; t += sample_dt) times.push_back(t);
    const auto start = Clock::now();
    const auto trace = thermrom::predict(model, profiles, times);
    const double elapsed = seconds_since(start);
    thermrom::write_csv(trace, out_path);
    std::cerr << "predict: " << trace.n_samples() << " samples in " << elapsed << " s\n";
  } else if (cmp->parsed()) {
    const auto trace_a = thermrom::read_csv(std::filesystem::path(trace_a_path));
    const auto trace_b = thermrom::read_csv(std::filesystem::path(trace_b_path));
    auto report = thermrom::compare_traces(trace_a, trace_b, reference_temperature);
    report.oracle_runtime_s = oracle_runtime;
    report.rom_runtime_s = rom_runtime;
    if (oracle_runtime > 0.0 && rom_runtime > 0.0) report.speedup = oracle_runtime / rom_runtime;
    std::cout << report.to_table();
    if (!out_path.empty()) {
      std::ofstream out(out_path);
      out << report.to_json() << '\n';
    }
  } else if (fth->parsed()) {
    const auto system = thermrom::load_system_config(config_path);
    const double run_dt = fth->count("--sample-dt") ? sample_dt : 0.0;
    const auto fit = thermrom::fit_h(system, power, duration, dx, run_dt);
    nlohmann::json doc{{"resistance_K_per_W", fit.resistance},
                       {"exposed_area_m2", fit.exposed_area},
                       {"h_est_W_per_m2K", fit.h},
                       {"sse", fit.sse}};
    std::cout << doc.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const thermrom::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const thermrom::IdMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumericalError;
  }
}
