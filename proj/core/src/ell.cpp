#include "dens/ell.hpp"

#include <cmath>
#include <cstring>
#include <list>
#include <mutex>
#include <stdexcept>

namespace dens {

namespace {

template <typename R>
TruncatedSeries<R> build_series(const AlphaSpec& alphas, EllKind kind, int cap) {
  auto s = TruncatedSeries<R>::constant(1.0, cap);
  // Interleave each linear factor with its matching divide so every
  // intermediate is the series of a smaller ensemble. Building the full
  // degree-N numerator first would push intermediates to binomial scale and
  // burn ~N/3 digits against the tiny low-order output coefficients.
  if (kind == EllKind::basic) {
    for (double a : alphas.values()) {
      s.mul_linear(a, -1.0);
      s.div_one_minus(1.0);
    }
  } else {
    for (double a : alphas.values()) {
      s.mul_linear(1.0, -1.0);
      s.div_one_minus(a);
    }
  }
  return s;
}

// Equal-alpha Lhat coefficients from the ODE of f = ((1-x)/(1-alpha x))^N:
//   (1-x)(1-alpha x) f' = N(alpha-1) f
// => (q+1) c_{q+1} = [(1+alpha) q + N(alpha-1)] c_q - alpha (q-1) c_{q-1}.
std::vector<double> equal_hat_recurrence(double alpha, int n, int q_max) {
  std::vector<double> c(static_cast<std::size_t>(q_max) + 1);
  c[0] = 1.0;
  if (q_max >= 1) c[1] = n * (alpha - 1.0);
  for (int q = 1; q < q_max; ++q) {
    const double next = ((1.0 + alpha) * q + n * (alpha - 1.0)) * c[q] -
                        alpha * (q - 1.0) * c[q - 1];
    c[q + 1] = next / (q + 1.0);
  }
  return c;
}

double log_binomial(double top, double k) {
  return std::lgamma(top + 1.0) - std::lgamma(k + 1.0) - std::lgamma(top - k + 1.0);
}

// Direct alternating sum for Lhat^q at equal alpha,
//   sum_j (-1)^j C(N,j) C(q-j+N-1, N-1) alpha^{q-j},
// assembled in log space. Catastrophic inside the oscillatory band for large
// N, but in the deep tail (q well past the support edge, where the forward
// recurrence's parasitic mode takes over) every term sits at the alpha^q
// scale of the result and the sum is benign.
double equal_hat_direct(double alpha, int n, int q) {
  const double log_a = std::log(alpha);
  const int j_max = std::min(q, n);
  double log_max = -1e300;
  for (int j = 0; j <= j_max; ++j) {
    const double lt =
        log_binomial(n, j) + log_binomial(q - j + n - 1.0, n - 1.0) + (q - j) * log_a;
    log_max = std::max(log_max, lt);
  }
  if (log_max < -745.0) return 0.0;  // below double range altogether
  double acc = 0.0;
  for (int j = 0; j <= j_max; ++j) {
    const double lt =
        log_binomial(n, j) + log_binomial(q - j + n - 1.0, n - 1.0) + (q - j) * log_a;
    acc += (j % 2 ? -1.0 : 1.0) * std::exp(lt - log_max);
  }
  return acc * std::exp(log_max);
}

}  // namespace

TruncatedSeries<double> series_from_product(const AlphaSpec& alphas, EllKind kind,
                                            int degree_cap) {
  return build_series<double>(alphas, kind, degree_cap);
}

TruncatedSeries<DoubleDouble> series_from_product_dd(const AlphaSpec& alphas,
                                                     EllKind kind, int degree_cap) {
  return build_series<DoubleDouble>(alphas, kind, degree_cap);
}

EllTable EllTable::build(const AlphaSpec& alphas, int q_max) {
  if (q_max < 0) throw std::invalid_argument("EllTable: q_max must be >= 0");
  EllTable t(alphas);
  const int n = alphas.n();
  t.ell_.resize(static_cast<std::size_t>(q_max) + 1);
  t.ell_hat_.resize(static_cast<std::size_t>(q_max) + 1);
  t.product_.resize(static_cast<std::size_t>(q_max) + 1);

  if (alphas.equal_flag()) {
    const double a = alphas.equal_value();
    const double log_a = std::log(a);
    t.ell_hat_ = equal_hat_recurrence(a, n, q_max);
    // The products L^q Lhat^q are non-negative and their total is exactly 1,
    // so the running remainder bounds every true product. Once the forward
    // recurrence's parasitic mode (amplified by alpha^{N-q}) breaks that
    // bound, hand the rest of the tail to the direct log-space sum (benign
    // for small N), or zero-fill: with the residual mass below 1e-18 the
    // positivity of the occupation kernel caps every true kernel entry
    // touching this zone at sqrt(remaining) anyway.
    constexpr int kDirectTailMaxN = 30;
    double remaining = 1.0;
    bool tail_mode = false;
    for (int q = 0; q <= q_max; ++q) {
      if (tail_mode)
        t.ell_hat_[q] = n <= kDirectTailMaxN ? equal_hat_direct(a, n, q) : 0.0;
      double lh = t.ell_hat_[q];
      double ell = 0.0, product = 0.0;
      if (lh != 0.0) {
        // L^q = alpha^{N-q} Lhat^q, staged through the half power so neither
        // factor leaves double range even when q - N is large.
        const double half = std::exp(0.5 * (n - q) * log_a);
        const double scaled = half * lh;
        if (std::isfinite(scaled) && scaled != 0.0) {
          ell = scaled * half;
          product = scaled * scaled;
        } else {
          const double log_abs_lh = std::log(std::abs(lh));
          product = std::exp((n - q) * log_a + 2.0 * log_abs_lh);
          ell = std::copysign(std::exp((n - q) * log_a + log_abs_lh), lh);
        }
      }
      if (!tail_mode && q > n &&
          (!(product >= -1e-18) || product > 2.0 * std::max(remaining, 0.0) + 1e-18)) {
        tail_mode = true;
        --q;  // redo this q through the direct route
        continue;
      }
      t.ell_hat_[q] = lh;
      t.ell_[q] = ell;
      t.product_[q] = product;
      remaining -= product;
    }
    return t;
  }

  if (n <= kHighPrecisionThreshold) {
    const auto sl = build_series<double>(alphas, EllKind::basic, q_max);
    const auto sh = build_series<double>(alphas, EllKind::hat, q_max);
    for (int q = 0; q <= q_max; ++q) {
      t.ell_[q] = sl.coeff(q);
      t.ell_hat_[q] = sh.coeff(q);
      t.product_[q] = t.ell_[q] * t.ell_hat_[q];
    }
  } else {
    const auto sl = build_series<DoubleDouble>(alphas, EllKind::basic, q_max);
    const auto sh = build_series<DoubleDouble>(alphas, EllKind::hat, q_max);
    for (int q = 0; q <= q_max; ++q) {
      const DoubleDouble p = sl[q] * sh[q];
      t.ell_[q] = sl.coeff(q);
      t.ell_hat_[q] = sh.coeff(q);
      t.product_[q] = to_double(p);
    }
  }
  return t;
}

namespace {

struct CacheEntry {
  std::vector<double> key;
  std::shared_ptr<const EllTable> table;
};

std::mutex g_cache_mutex;
std::list<CacheEntry> g_cache;  // most-recently-used at front
constexpr std::size_t kCacheCapacity = 16;

}  // namespace

std::shared_ptr<const EllTable> shared_ell_table(const AlphaSpec& alphas, int q_max) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  for (auto it = g_cache.begin(); it != g_cache.end(); ++it) {
    if (it->key == alphas.values() && it->table->q_max() >= q_max) {
      g_cache.splice(g_cache.begin(), g_cache, it);
      return it->table;
    }
  }
  // Build with headroom so nearby requests hit the cache.
  const int built = std::max(q_max + q_max / 2, q_max + 16);
  auto table = std::make_shared<const EllTable>(EllTable::build(alphas, built));
  // Replace any stale shorter entry for the same alphas.
  g_cache.remove_if([&](const CacheEntry& e) { return e.key == alphas.values(); });
  g_cache.push_front(CacheEntry{alphas.values(), table});
  if (g_cache.size() > kCacheCapacity) g_cache.pop_back();
  return table;
}

double ell(int q, const AlphaSpec& alphas) {
  if (q < 0) return 0.0;
  return shared_ell_table(alphas, q)->ell(q);
}

double ell_hat(int q, const AlphaSpec& alphas) {
  if (q < 0) return 0.0;
  return shared_ell_table(alphas, q)->ell_hat(q);
}

double laguerre_l(int n, double rho) {
  if (n < 0) return 0.0;
  double lm1 = 0.0;  // L_{-1}
  double l = 1.0;    // L_0
  for (int k = 0; k < n; ++k) {
    const double lp1 = ((2.0 * k + 1.0 - rho) * l - k * lm1) / (k + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

double laguerre_m(int p, double rho) {
  if (p < 0) throw std::invalid_argument("laguerre_m: p must be >= 0");
  if (p == 0) return 1.0;
  // One pass of the recurrence gives both L_p and L_{p-1}.
  double lm1 = 0.0, l = 1.0;
  for (int k = 0; k < p; ++k) {
    const double lp1 = ((2.0 * k + 1.0 - rho) * l - k * lm1) / (k + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l - lm1;
}

std::pair<double, double> ell_laguerre_limit_check(int p, double rho, int n) {
  if (n < 1 || !(rho > 0.0) || rho >= n)
    throw std::invalid_argument("ell_laguerre_limit_check: need 0 < rho < n");
  const AlphaSpec alphas = AlphaSpec::equal(1.0 - rho / n, n);
  return {ell(p, alphas), std::exp(-rho) * laguerre_m(p, rho)};
}

std::pair<double, double> ell_hat_laguerre_limit_check(int p, double rho, int n) {
  if (n < 1 || !(rho > 0.0) || rho >= n)
    throw std::invalid_argument("ell_hat_laguerre_limit_check: need 0 < rho < n");
  const AlphaSpec alphas = AlphaSpec::equal(1.0 - rho / n, n);
  return {ell_hat(p, alphas), laguerre_m(p, rho)};
}

}  // namespace dens
