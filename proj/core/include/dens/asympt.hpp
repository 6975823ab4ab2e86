// Large-N asymptotics: the resolvent functional equation and its numerical
// continuation, the equal-alpha limit shape with saturation plateau, edge
// (double-scaling) behavior, sine-kernel predictions, and the small-weight
// Laguerre limit. Each prediction ships with a finite-N convergence check
// driven by the exact kernel module.
#pragma once

#include <complex>
#include <vector>

#include "dens/ensemble.hpp"

namespace dens {

// One accepted root of sigma = u/(1-u) + u*G0(u) on the physical branch
// (u -> 1 as sigma -> infinity, approached from sigma + i*offset above the
// real axis so Im G >= 0 and rho = Im G / pi).
struct ResolventSolution {
  double sigma = 0.0;
  std::complex<double> u;
  std::complex<double> g;  // log u on the physical branch
  double rho = 0.0;        // Im g / pi, clamped to [0, 1]
  double residual = 0.0;   // |sigma_c - u/(1-u) - u G0(u)|
};

// Support endpoints of the limiting density: values of F(u) = u/(1-u) + uG0(u)
// at its two real critical points (the double-zero condition F'(u) = 0).
struct SupportEdges {
  double lower = 0.0;  // saturation endpoint b
  double upper = 0.0;  // spectrum edge a
};

class ResolventSolver {
 public:
  explicit ResolventSolver(const AlphaSpec& alphas, double imag_offset = 1e-9);

  const SupportEdges& edges() const { return edges_; }

  // Solve at one sigma > 0 by secant continuation from the large-sigma
  // asymptote; throws convergence_error with the last residual on failure.
  ResolventSolution solve(double sigma) const;

  // Continuation along a descending grid reusing each root as the next seed.
  std::vector<ResolventSolution> solve_grid(const std::vector<double>& sigmas) const;

  std::complex<double> g0(std::complex<double> u) const;  // resolvent of the alphas
  std::complex<double> f(std::complex<double> u) const;   // u/(1-u) + u G0(u)

 private:
  ResolventSolution refine(std::complex<double> seed, double sigma) const;

  AlphaSpec alphas_;
  double offset_;
  SupportEdges edges_;
};

ResolventSolution solve_resolvent(double sigma, const AlphaSpec& alphas);

// Equal-alpha limiting density: rho = 1 on (0,b), the arctan law on (b,a),
// 0 beyond a, with a = (1+sqrt(alpha))/(1-sqrt(alpha)), b = 1/a.
class LimitShape {
 public:
  explicit LimitShape(double alpha);

  double alpha() const { return alpha_; }
  double a() const { return a_; }
  double b() const { return b_; }

  // (2/pi) arctan sqrt(b(a-x)/(a(x-b))) on (b,a); exactly 1 on [0,b].
  double density(double sigma) const;
  // Same curve from the branch of the closed-form resolvent exponential
  // (independent derivation; agrees pointwise with density()).
  double density_log_form(double sigma) const;
  // Closed-form e^{G} on the physical branch, valid off the plateau.
  std::complex<double> resolvent_exp(std::complex<double> z) const;

 private:
  double alpha_, a_, b_;
};

LimitShape limit_shape_equal(double alpha);

// Finite-N exact density against the limit shape on the bulk. The plateau
// check excludes the literal margin * N^{-2/3} collar below b; the bulk
// window additionally enforces a fixed sigma stand-off (bulk_floor) from both
// endpoints, because at fixed scaled margin the window boundary rides the
// edge-scaling zone where the deviation is N-stationary and the 1/N bulk
// convergence never shows.
struct BulkComparison {
  int n = 0;
  double margin = 0.0;
  double bulk_collar = 0.0;     // sigma distance excluded around a and b
  double plateau_collar = 0.0;  // sigma collar below b for the plateau scan
  double sup_norm = 0.0;        // max |N rho_N(p) - rho_inf(p/N)| over the bulk
  int argmax_p = 0;
  double plateau_min = 1.0;     // min N rho_N(p) on the saturated side
  int bulk_lo = 0, bulk_hi = 0;
};

BulkComparison finite_n_vs_limit(double alpha, int n, double margin = 3.0,
                                 double bulk_floor = 0.3);

// Edge behavior: exponent of the vanishing density at sigma = a, and the
// N^{2/3} collapse of rescaled finite-N edge profiles.
struct EdgeCollapse {
  int n_small = 0, n_large = 0;
  double distance = 0.0;   // sup-norm between aligned profiles / profile scale
  double scale_f = 1.0;    // fitted affine amplitude
  double scale_x = 1.0;    // fitted affine x stretch
};

struct EdgeScalingReport {
  double exponent = 0.0;        // log-log fit of rho_inf near a; expect 1/2
  double exponent_window_lo = 0.0;
  double exponent_window_hi = 0.0;
  std::vector<EdgeCollapse> collapses;
  std::vector<double> scaling_x;        // reference profile of the edge integral
  std::vector<double> scaling_profile;
};

EdgeScalingReport edge_scaling_check(double alpha, const std::vector<int>& n_list,
                                     double x_lo = -6.0, double x_hi = 3.0);

// int_0^infty dtheta theta^{-1/2} exp(-x theta - b theta^3); the square-root
// singularity is removed by theta = s^2.
double scaling_integral(double x, double b = 1.0);

// Sine-kernel universality at integer separations in the bulk.
struct SineKernelRow {
  int separation = 0;
  double measured = 0.0;    // |R(p0,p0+s) R(p0+s,p0)|, normalized at s*
  double predicted = 0.0;   // sin^2(pi rho_bar s)/s^2, normalized at s*
  double deviation = 0.0;   // relative where the prediction has support, else absolute
  bool relative = false;
};

struct SineKernelReport {
  int center_p = 0;
  double rho_bar = 0.0;     // local N rho at the center
  int reference_separation = 1;
  std::vector<SineKernelRow> rows;
  int saturated_p = 0;
  double saturated_max_abs = 0.0;  // max |connected| at integer separations there
};

SineKernelReport sine_kernel_check(double alpha, int n, int center_p = -1,
                                   const std::vector<int>& separations = {1, 2, 3, 4,
                                                                          5});

// Small-weight limit alpha = 1 - rho/N, N -> infinity. P_inf(p) is the
// limiting site occupation; fixed against the finite-N bridge as
//   P_inf(p) = 1 - e^{-rho} sum_{r<=p} M_r(rho)^2
// (non-negative, decreasing in p, P_inf(0) = 1 - e^{-rho}); the small-rho
// expansion is rho - (p + 1/2) rho^2 + O(rho^3).
double small_weight_density(int p, double rho);

// Limiting kernel sum_{k<=min(p,q)} M_{p-k} M_{q-k}; the physical connected
// correlator in this regime is -e^{-2 rho} R_inf(p,q) R_inf(q,p). Expands to
// -rho + min(p,q) rho^2 + O(rho^3).
double small_weight_correlator(int p, int q, double rho);

}  // namespace dens
