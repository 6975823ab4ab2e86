// The acceptance checklist: every closed formula validated against the
// enumeration oracle, the MCMC sampler, and the large-N predictions, with
// tolerances pinned in code. Used by the `validate` CLI subcommand and the
// acceptance test binary.
#pragma once

#include <string>
#include <vector>

namespace dens {

enum class ValidationLevel {
  quick,  // the sub-minute criteria
  full,   // everything
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;  // measured numbers, one-line
  std::string note;    // non-empty when something needs explaining
};

struct ValidationReport {
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
};

// Runs criteria sequentially in id order. `which` restricts to a single
// criterion id (0 = all at the chosen level).
ValidationReport run_acceptance(ValidationLevel level, int threads = 1,
                                int which = 0);

}  // namespace dens
