#pragma once

#include <vector>

namespace thermrom {

/// One piecewise-constant power segment, left-closed: holds from start_time
/// until the next segment begins.
struct PowerSegment {
  double start_time{};  // s
  double watts{};       // W
};

/// Piecewise-constant power schedule. Segments are ordered by start_time,
/// the first segment starts at t = 0, and powers are non-negative.
struct PowerProfile {
  std::vector<PowerSegment> segments;

  /// Power at time t (last segment with start_time <= t). Zero for an
  /// empty profile.
  double at(double t) const;

  /// Exact integral of the schedule over [0, t_end] [J].
  double integral(double t_end) const;

  /// True if every segment is zero (or the profile is empty).
  bool is_zero() const;

  static PowerProfile constant(double watts) { return PowerProfile{{{0.0, watts}}}; }
};

/// Throws ConfigError on unordered start times, a nonzero first start time,
/// or negative power.
void validate(const PowerProfile& p);

/// Sum of several schedules, with segments at the union of transient times.
PowerProfile sum_profiles(const std::vector<PowerProfile>& profiles);

}  // namespace thermrom
