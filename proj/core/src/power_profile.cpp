#include "thermrom/power_profile.hpp"

#include <algorithm>
#include <set>

#include "thermrom/errors.hpp"

namespace thermrom {

double PowerProfile::at(double t) const {
  double watts = 0.0;
  for (const auto& seg : segments) {
    if (seg.start_time <= t)
      watts = seg.watts;
    else
      break;
  }
  return watts;
}

double PowerProfile::integral(double t_end) const {
  double energy = 0.0;
  for (std::size_t j = 0; j < segments.size(); ++j) {
    const double t0 = segments[j].start_time;
    if (t0 >= t_end) break;
    const double t1 = (j + 1 < segments.size()) ? std::min(segments[j + 1].start_time, t_end)
                                                : t_end;
    energy += segments[j].watts * (t1 - t0);
  }
  return energy;
}

bool PowerProfile::is_zero() const {
  return std::all_of(segments.begin(), segments.end(),
                     [](const PowerSegment& s) { return s.watts == 0.0; });
}

void validate(const PowerProfile& p) {
  if (p.segments.empty()) return;  // empty schedule means zero power
  if (p.segments.front().start_time != 0.0)
    throw ConfigError("power profile: first segment must start at t = 0");
  for (std::size_t j = 0; j < p.segments.size(); ++j) {
    if (p.segments[j].watts < 0.0)
      throw ConfigError("power profile: negative power (sinks are boundaries)");
    if (j > 0 && !(p.segments[j].start_time > p.segments[j - 1].start_time))
      throw ConfigError("power profile: start_times must be strictly increasing");
  }
}

PowerProfile sum_profiles(const std::vector<PowerProfile>& profiles) {
  std::set<double> times{0.0};
  for (const auto& p : profiles)
    for (const auto& seg : p.segments) times.insert(seg.start_time);

  PowerProfile total;
  for (double t : times) {
    double watts = 0.0;
    for (const auto& p : profiles) watts += p.at(t);
    total.segments.push_back({t, watts});
  }
  return total;
}

}  // namespace thermrom
