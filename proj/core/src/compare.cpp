#include "thermrom/compare.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "thermrom/errors.hpp"

namespace thermrom {

using nlohmann::json;

ComparisonReport compare_traces(const TemperatureTrace& trace_a, const TemperatureTrace& trace_b,
                                double reference_temperature) {
  const double t_lo = std::max(trace_a.times.front(), trace_b.times.front());
  const double t_hi = std::min(trace_a.times.back(), trace_b.times.back());
  if (!(t_hi >= t_lo)) throw NoOverlap("traces share no overlapping time range");

  // evaluate on the coarser of the two grids, clipped to the overlap
  const bool a_coarser = trace_a.n_samples() <= trace_b.n_samples();
  const auto& grid_times = a_coarser ? trace_a.times : trace_b.times;
  std::vector<double> times;
  for (double t : grid_times)
    if (t >= t_lo && t <= t_hi) times.push_back(t);

  constexpr double kRiseEpsilon = 1e-12;
  ComparisonReport report;
  report.reference_temperature = reference_temperature;
  for (const auto& id : trace_a.ids) {
    const std::size_t sa = trace_a.series_index(id);
    const std::size_t sb = trace_b.series_index(id);

    double sum_pct = 0.0, sum_sq = 0.0, max_abs = 0.0;
    for (double t : times) {
      const double va = trace_a.sample_at(sa, t);
      const double vb = trace_b.sample_at(sb, t);
      const double err = std::abs(va - vb);
      const double rise = std::abs(vb - reference_temperature);
      sum_pct += err / (rise + kRiseEpsilon);
      sum_sq += err * err;
      max_abs = std::max(max_abs, err);
    }
    ComparisonReport::BodyMetrics metrics;
    metrics.id = id;
    metrics.average_percent_error = 100.0 * sum_pct / static_cast<double>(times.size());
    metrics.max_abs_error = max_abs;
    metrics.rmse = std::sqrt(sum_sq / static_cast<double>(times.size()));
    report.bodies.push_back(std::move(metrics));
  }
  return report;
}

std::string ComparisonReport::to_json() const {
  json doc;
  doc["reference_temperature"] = reference_temperature;
  doc["error_basis"] = "temperature rise above reference";
  doc["bodies"] = json::array();
  for (const auto& body : bodies)
    doc["bodies"].push_back({{"id", body.id},
                             {"average_percent_error", body.average_percent_error},
                             {"max_abs_error_K", body.max_abs_error},
                             {"rmse_K", body.rmse}});
  if (oracle_runtime_s >= 0.0) doc["oracle_runtime_s"] = oracle_runtime_s;
  if (rom_runtime_s >= 0.0) doc["rom_runtime_s"] = rom_runtime_s;
  if (speedup >= 0.0) doc["speedup"] = speedup;
  return doc.dump(2);
}

std::string ComparisonReport::to_table() const {
  std::ostringstream out;
  out << "errors on temperature rise above " << reference_temperature << " degC\n";
  out << std::left << std::setw(16) << "body" << std::right << std::setw(12) << "avg err %"
      << std::setw(14) << "max |err| K" << std::setw(12) << "RMSE K" << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto& body : bodies)
    out << std::left << std::setw(16) << body.id << std::right << std::setw(12)
        << body.average_percent_error << std::setw(14) << body.max_abs_error << std::setw(12)
        << body.rmse << '\n';
  if (speedup >= 0.0) {
    out << std::setprecision(2) << "oracle " << oracle_runtime_s << " s, rom " << rom_runtime_s
        << " s, speedup " << speedup << "x\n";
  }
  return out.str();
}

}  // namespace thermrom
