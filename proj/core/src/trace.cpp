#include "thermrom/trace.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "thermrom/errors.hpp"

namespace thermrom {

std::size_t TemperatureTrace::series_index(const std::string& id) const {
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw IdMismatch("trace has no series '" + id + "'");
  return static_cast<std::size_t>(it - ids.begin());
}

double TemperatureTrace::sample_at(std::size_t series, double t) const {
  const auto& ts = times;
  const auto& vs = values[series];
  if (t <= ts.front()) return vs.front();
  if (t >= ts.back()) return vs.back();
  const auto hi = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i = static_cast<std::size_t>(hi - ts.begin());
  const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return vs[i - 1] + w * (vs[i] - vs[i - 1]);
}

void write_csv(const TemperatureTrace& trace, std::ostream& out) {
  out << "time";
  for (const auto& id : trace.ids) out << ',' << id;
  out << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t s = 0; s < trace.n_samples(); ++s) {
    out << trace.times[s];
    for (std::size_t b = 0; b < trace.n_series(); ++b) out << ',' << trace.values[b][s];
    out << '\n';
  }
}

void write_csv(const TemperatureTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  write_csv(trace, out);
}

TemperatureTrace read_csv(std::istream& in) {
  TemperatureTrace trace;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace CSV: empty file");
  {
    std::istringstream header(line);
    std::string field;
    if (!std::getline(header, field, ',') || field != "time")
      throw ConfigError("trace CSV: first column must be 'time'");
    while (std::getline(header, field, ',')) trace.ids.push_back(field);
  }
  trace.values.assign(trace.ids.size(), {});
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    trace.times.push_back(std::stod(field));
    for (std::size_t b = 0; b < trace.ids.size(); ++b) {
      if (!std::getline(row, field, ','))
        throw ConfigError("trace CSV: short row at t = " + std::to_string(trace.times.back()));
      trace.values[b].push_back(std::stod(field));
    }
  }
  for (std::size_t s = 1; s < trace.times.size(); ++s)
    if (!(trace.times[s] > trace.times[s - 1]))
      throw ConfigError("trace CSV: times must be strictly increasing");
  return trace;
}

TemperatureTrace read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  return read_csv(in);
}

}  // namespace thermrom
