#pragma once

#include <functional>
#include <vector>

namespace thermrom {

struct SimplexOptions {
  double tolerance{1e-10};   // stop when the simplex SSE spread falls below this
  int max_iterations{2000};
  double initial_step{0.1};  // relative perturbation building the first simplex
};

struct SimplexResult {
  std::vector<double> x;
  double fmin{};
  int iterations{};
  bool converged{};
};

/// Derivative-free Nelder-Mead simplex minimizer.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, const SimplexOptions& opts = {});

}  // namespace thermrom
