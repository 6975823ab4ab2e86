// Ground-truth enumeration of the measure for small N: direct summation of
// |Delta(h)| chi_h over all strictly ordered level tuples in [0, h_max]^N.
// Independent of every closed formula it validates; the character itself can
// be evaluated through two independent backends as a self-check.
#pragma once

#include <cstdint>
#include <vector>

#include "dens/ensemble.hpp"

namespace dens {

enum class CharacterBackend {
  automatic,        // equal-alpha formula when degenerate, determinant otherwise
  determinant,
  gelfand_tseytlin,  // GT-pattern sum; exponential in the weights, small h only
  equal_alpha,
};

struct EnumerationOptions {
  int h_max = 40;
  int pair_window = -1;  // raw pair table covers [0,w]^2; -1 -> min(h_max, 64)
  CharacterBackend backend = CharacterBackend::automatic;
  int threads = 1;
  double budget = 2e8;  // maximum number of configurations before cost_error
};

struct EnumerationResult {
  int n = 0;
  int h_max = 0;
  double z = 0.0;             // truncated partition function
  double config_count = 0.0;  // configurations actually summed
  double tail_estimate = 0.0; // conservative bound on missing mass, as fraction of z

  std::vector<double> density;      // rho(p) = <n_p>/N for p = 0..h_max
  int pair_window = 0;
  std::vector<double> pair_raw;     // <n_p n_q>, (w+1)x(w+1) row-major
  std::vector<double> shell_mass;   // Z contribution per leading level h_1

  double occupation(int p) const;                 // <n_p>
  double pair_connected(int p, int q) const;      // <n_p n_q> - <n_p><n_q>
  // Truncated generating averages for cross-checking the closed formulas.
  double u1(double t) const;
  double u2(double t1, double t2) const;
  double k2(double t1, double t2) const;
};

// Throws cost_error when C(h_max+1, N) exceeds opts.budget. Parallelizes over
// the leading level; partial sums are merged in shell order, so results do
// not depend on the thread count.
EnumerationResult enumerate_measure(const AlphaSpec& alphas,
                                    const EnumerationOptions& opts);

}  // namespace dens
