// The two polynomial families of source coefficients
//   L^q    = [x^q] prod_j (alpha_j - x) / (1-x)^N
//   Lhat^q = [x^q] (1-x)^N / prod_j (1 - alpha_j x)
// plus the Laguerre differences M_p that govern the small-weight limit.
//
// Evaluation routes:
//  * equal alphas: a three-term recurrence in q derived from the first-order
//    ODE of ((1-x)/(1-alpha x))^N. O(q_max) and free of the binomial
//    cancellation that plagues the direct convolution for N ~ 100.
//  * distinct alphas: product/divide series arithmetic, in plain doubles up
//    to moderate N, switching to double-double above (the alternating
//    prod(alpha_j - x) coefficients cancel against (1-x)^{-N} and eat ~N/3
//    digits).
// For equal alphas the families are tied: L^q = alpha^{N-q} Lhat^q.
#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "dens/ensemble.hpp"
#include "dens/series.hpp"

namespace dens {

enum class EllKind {
  basic,  // prod_j (alpha_j - x) / (1-x)^N
  hat,    // (1-x)^N / prod_j (1 - alpha_j x)
};

// Expand the rational generating function of the requested kind around x = 0
// through degree_cap. Coefficient reads replace the contour integrals.
TruncatedSeries<double> series_from_product(const AlphaSpec& alphas, EllKind kind,
                                            int degree_cap);
TruncatedSeries<DoubleDouble> series_from_product_dd(const AlphaSpec& alphas,
                                                     EllKind kind, int degree_cap);

// Immutable table of L^q and Lhat^q for q = 0..q_max; safe for concurrent reads.
class EllTable {
 public:
  static EllTable build(const AlphaSpec& alphas, int q_max);

  const AlphaSpec& alphas() const { return alphas_; }
  int q_max() const { return static_cast<int>(ell_hat_.size()) - 1; }

  double ell(int q) const {
    if (q < 0) return 0.0;
    return ell_.at(static_cast<std::size_t>(q));
  }
  double ell_hat(int q) const {
    if (q < 0) return 0.0;
    return ell_hat_.at(static_cast<std::size_t>(q));
  }
  // L^q * Lhat^q; non-negative for equal alphas.
  double ell_product(int q) const {
    if (q < 0) return 0.0;
    return product_.at(static_cast<std::size_t>(q));
  }

  // N above which the distinct-alpha route switches to double-double.
  static constexpr int kHighPrecisionThreshold = 60;

 private:
  explicit EllTable(AlphaSpec alphas) : alphas_(std::move(alphas)) {}
  AlphaSpec alphas_;
  std::vector<double> ell_;
  std::vector<double> ell_hat_;
  std::vector<double> product_;
};

// Process-wide memoized tables keyed by the alpha values; one table per
// AlphaSpec feeds every kernel window. Thread-safe insert-or-read.
std::shared_ptr<const EllTable> shared_ell_table(const AlphaSpec& alphas, int q_max);

// Single-value accessors (convenience wrappers over the shared table).
double ell(int q, const AlphaSpec& alphas);
double ell_hat(int q, const AlphaSpec& alphas);

// Laguerre polynomial L_n(rho), normalized to L_n(0) = 1, by the upward
// three-term recurrence (n+1)L_{n+1} = (2n+1-rho)L_n - n L_{n-1}.
double laguerre_l(int n, double rho);

// M_p = L_p - L_{p-1} with L_{-1} = 0, so M_0 = 1.
double laguerre_m(int p, double rho);

// Evaluate (L^p_N at all alpha = 1 - rho/N, e^{-rho} M_p(rho)); the two agree
// up to O(1/N). The hatted variant converges to M_p with no e^{-rho} factor.
std::pair<double, double> ell_laguerre_limit_check(int p, double rho, int n);
std::pair<double, double> ell_hat_laguerre_limit_check(int p, double rho, int n);

}  // namespace dens
