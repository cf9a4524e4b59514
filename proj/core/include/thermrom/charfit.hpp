#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thermrom/rom.hpp"
#include "thermrom/system_config.hpp"

namespace thermrom {

/// One unit-power trial: deviation of every body from the linear curve.
struct TrialResult {
  std::string source_id;
  std::vector<double> times;                    // s
  std::vector<std::string> body_ids;
  std::vector<std::vector<double>> deviation;   // [body][sample], K
  double horizon{};                             // s (t_m)
};

/// One exponential fit A(1 - e^{-k t}).
struct ExponentialFit {
  double amplitude{};   // K (or K/W for unit power)
  double rate{};        // 1/s; meaningful only when identifiable
  double sse{};         // K^2
  double rmse{};        // K
  int iterations{};
  bool converged{};
  bool identifiable{true};
};

/// Per-(body, source) fit diagnostics.
struct FitReport {
  struct Entry {
    std::string body_id;
    std::string source_id;
    ExponentialFit fit;
  };
  std::vector<Entry> entries;
  std::vector<std::string> warnings;

  std::string to_json() const;
};

/// Run one oracle simulation per source: that source at 1 W, all others at
/// 0, horizon t_m. Trials honor the THERMROM_THREADS cap and run in
/// parallel. Deviations are measured against the trial's own linear curve.
std::vector<TrialResult> run_unit_trials(const SystemConfig& system, double t_m, double dx,
                                         double sample_dt = 0.0);

/// Fit A, k minimizing sum of squared error against A(1 - e^{-k t}).
/// total_capacitance seeds k0 = 1/(|A0| C_T) when given, else k0 = 3/t_m.
/// A flat series comes back identifiable = false with amplitude 0.
ExponentialFit fit_exponential(const std::vector<double>& times,
                               const std::vector<double>& deviation,
                               std::optional<double> total_capacitance = std::nullopt);

/// Full characterization: unit trials, per-(body, source) exponential fits,
/// resistance matrix assembly. k[i] is taken from the trial whose source is
/// body i, falling back to that body's largest-|A| trial.
struct CharacterizationResult {
  CharacterizedModel model;
  FitReport report;
};
CharacterizationResult characterize(const SystemConfig& system, double t_m, double dx,
                                    double sample_dt = 0.0);

/// Endpoint resistance estimator dev(t_m)/P; cross-check for the fitted A.
/// Throws NotStationary when the deviation is still moving at the tail.
double resistance_from_trial(const TrialResult& trial, std::size_t body, double power_w);

/// Convection round trip: simulate a constant-power run, fit the body-fluid
/// resistance in T(t) = T0 + P R (1 - e^{-t/(R C_T)}), report h = 1/(A R).
struct ConvectionFit {
  double resistance{};  // K/W
  double h{};           // W/(m^2 K)
  double exposed_area{};  // m^2
  double sse{};
};
ConvectionFit fit_h(const SystemConfig& system, double power_w, double duration, double dx,
                    double sample_dt = 0.0);

}  // namespace thermrom
