#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace thermrom {

/// Sampled probe temperatures, one series per body id.
struct TemperatureTrace {
  std::vector<double> times;                 // s, strictly increasing
  std::vector<std::string> ids;              // body ids, CSV column order
  std::vector<std::vector<double>> values;   // values[body][sample], degC

  std::size_t n_samples() const { return times.size(); }
  std::size_t n_series() const { return ids.size(); }

  /// Index of the series for `id`; throws IdMismatch if absent.
  std::size_t series_index(const std::string& id) const;

  /// Linear interpolation of series `series` at time t (t within range).
  double sample_at(std::size_t series, double t) const;
};

/// CSV header `time,<id>...`, one row per sample, round-trip precision.
void write_csv(const TemperatureTrace& trace, std::ostream& out);
void write_csv(const TemperatureTrace& trace, const std::filesystem::path& path);
TemperatureTrace read_csv(std::istream& in);
TemperatureTrace read_csv(const std::filesystem::path& path);

}  // namespace thermrom
