#pragma once

#include <string>
#include <vector>

#include "thermrom/trace.hpp"

namespace thermrom {

/// Trace-vs-trace error metrics. Percent error is measured on the
/// temperature rise above the reference temperature, not on absolute degC.
struct ComparisonReport {
  struct BodyMetrics {
    std::string id;
    double average_percent_error{};  // mean over samples of |dT| / rise
    double max_abs_error{};          // K
    double rmse{};                   // K
  };
  std::vector<BodyMetrics> bodies;
  double reference_temperature{};
  double oracle_runtime_s{-1.0};  // optional, filled by the CLI
  double rom_runtime_s{-1.0};
  double speedup{-1.0};

  std::string to_json() const;
  std::string to_table() const;
};

/// Compare trace_a (candidate) against trace_b (reference) on the coarser
/// of the two time grids, restricted to the overlapping range. Throws
/// NoOverlap / IdMismatch.
ComparisonReport compare_traces(const TemperatureTrace& trace_a, const TemperatureTrace& trace_b,
                                double reference_temperature);

}  // namespace thermrom
