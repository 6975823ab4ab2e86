// Exact finite-N observables: generating average U_1, level density, kernel
// R(p,q), factorized pair correlator, and the connected two-point generating
// function K_2.
//
// Index/sign conventions. The finite-sum formulas for the density and the
// kernel float their summation offsets depending on how the contours are
// massaged, so the shipped constants were pinned once against independent
// ground truth (the N=1 geometric ensemble in closed form and the N=2
// enumeration oracle) and are frozen below; calibrate_* re-runs the search so
// a regression test can fail on any drift. The winning convention:
//
//   N rho(p) = 1 - sum_{k=0}^{p} L^k Lhat^k
//   R(p,q)   = sum_{k=0}^{min(p,q)} L^{p-k} Lhat^{q-k}
//   rho_c(p,q) = -R(p,q) R(q,p)        (p != q)
//
// with the exact diagonal tie N rho(p) = 1 - R(p,p). No alpha^{-N+q}
// prefactor appears: it is not even well defined for distinct alphas, and
// only the gauge-invariant products R(p,q)R(q,p) are physical.
#pragma once

#include <vector>

#include "dens/ell.hpp"
#include "dens/ensemble.hpp"

namespace dens {

// rho(p) for p = 0..p_max (normalized so the values sum to 1 over all p).
struct DensityProfile {
  int n = 0;
  std::vector<double> rho;
  double tail_mass = 0.0;  // exact complement 1 - sum of tabulated rho

  int p_max() const { return static_cast<int>(rho.size()) - 1; }
  double total() const;
};

struct KernelWindow {
  int p_lo = 0, p_hi = 0, q_lo = 0, q_hi = 0;
  int rows() const { return p_hi - p_lo + 1; }
  int cols() const { return q_hi - q_lo + 1; }
};

// R(p,q) over a rectangular window, row-major.
struct KernelTable {
  KernelWindow window;
  std::vector<double> values;

  double at(int p, int q) const {
    return values[static_cast<std::size_t>(p - window.p_lo) * window.cols() +
                  static_cast<std::size_t>(q - window.q_lo)];
  }
};

struct DensityCalibration {
  int sign;       // overall sign s
  int shift_ell;  // index offset on L
  int shift_hat;  // index offset on Lhat
  int additive;   // constant added inside the bracket
  bool operator==(const DensityCalibration&) const = default;
};

struct KernelCalibration {
  int sign;
  int shift_ell;
  int shift_hat;
  bool operator==(const KernelCalibration&) const = default;
};

// Frozen by the oracle calibration; regression-tested.
inline constexpr DensityCalibration kDensityCalibration{-1, 0, 0, -1};
inline constexpr KernelCalibration kKernelCalibration{1, 0, 0};

// U_1(t) = <(1/N) sum_k t^{h_k}>, normalized so U_1(1) = 1. Distinct alphas
// use the closed finite sum; near-degenerate alphas fall back to summing the
// density series. Requires |t| < 1/max(alpha_k).
double u1_moment(double t, const AlphaSpec& alphas);

// rho(p) = <n_p>/N where n_p is the 0/1 occupation of site p.
double density_exact(int p, const AlphaSpec& alphas);

// Table through p_max (p_max < 0 selects automatically so the tabulated mass
// reaches 1 - tail_tol).
DensityProfile density_profile(const AlphaSpec& alphas, int p_max = -1,
                               double tail_tol = 1e-13);

double kernel_r(int p, int q, const AlphaSpec& alphas);

KernelTable kernel_table(const AlphaSpec& alphas, const KernelWindow& window,
                         int threads = 1);

// Connected two-level correlator <n_p n_q> - <n_p><n_q>. Off the diagonal
// this is the factorized -R(p,q)R(q,p) (non-positive); on the diagonal the
// occupation is 0/1 so the connected value is N rho (1 - N rho).
double pair_correlator(int p, int q, const AlphaSpec& alphas);

// K_2(t1,t2) = U_2(t1,t2) - U_1(t1)U_1(t2) via the explicit double sum over
// source indices. Distinct alphas only; throws std::domain_error at the
// t_i alpha_k = alpha_l pole coincidences.
double connected_k2(double t1, double t2, const AlphaSpec& alphas);

// Calibration searches used to pin the frozen constants. Each scans a small
// grid of (sign, shifts) against the N=1 closed form and the N=2 enumeration
// oracle and returns the unique convention matching both to ~1e-12.
DensityCalibration calibrate_density_convention();
KernelCalibration calibrate_kernel_convention();

}  // namespace dens
