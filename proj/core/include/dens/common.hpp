// Shared error types and small utilities used across the library.
#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace dens {

// Enumeration or table fill would exceed the configured work budget.
// Carries the estimated configuration count so callers can reduce h_max/N.
class cost_error : public std::runtime_error {
 public:
  cost_error(const std::string& what, double estimated_configs)
      : std::runtime_error(what), estimated_configs_(estimated_configs) {}
  double estimated_configs() const { return estimated_configs_; }

 private:
  double estimated_configs_;
};

// Iterative root finder failed to converge; carries the last iterate so the
// caller can inspect how bad things were.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Resolve an effective thread count: explicit request wins, then the
// DISCRETE_ENSEMBLE_THREADS environment variable, then 1.
int resolve_threads(int requested);

// Run fn(i) for i in [0, count). Results must be written to disjoint slots so
// the outcome is independent of the schedule. threads <= 1 runs inline.
void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace dens
