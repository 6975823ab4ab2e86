#include "dens/exact_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dens/common.hpp"
#include "dens/oracle.hpp"

namespace dens {

namespace {

// <n_p> under an arbitrary (sign, shifts, additive) convention; the frozen
// constants make this 1 - sum_{k<=p} L^k Lhat^k.
double occupation_with(const EllTable& table, int p, const DensityCalibration& cal) {
  double sum = 0.0;
  for (int k = 0; k <= p; ++k) {
    const int r = p - k;
    if (cal.shift_ell == cal.shift_hat) {
      sum += table.ell_product(r + cal.shift_ell);
    } else {
      sum += table.ell(r + cal.shift_ell) * table.ell_hat(r + cal.shift_hat);
    }
  }
  return cal.sign * (sum + cal.additive);
}

double kernel_with(const EllTable& table, int p, int q, const KernelCalibration& cal) {
  const int m = std::min(p, q);
  double sum = 0.0;
  for (int k = 0; k <= m; ++k)
    sum += table.ell(p - k + cal.shift_ell) * table.ell_hat(q - k + cal.shift_hat);
  return cal.sign * sum;
}

double occupation(const EllTable& table, int p) {
  double occ = occupation_with(table, p, kDensityCalibration);
  // The exact quantity lies in [0,1]; shave floating-point dust only.
  if (occ < 0.0 && occ > -1e-11) occ = 0.0;
  if (occ > 1.0 && occ < 1.0 + 1e-11) occ = 1.0;
  return occ;
}

std::shared_ptr<const EllTable> table_for(const AlphaSpec& alphas, int q_needed) {
  // +2 headroom so shifted conventions never read past the cap.
  return shared_ell_table(alphas, q_needed + 2);
}

double u1_closed_sum(double t, const AlphaSpec& alphas) {
  const auto& a = alphas.values();
  const int n = alphas.n();
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double denom = 1.0 - t * a[k];
    if (std::abs(denom) < 1e-12)
      throw std::domain_error("u1_moment: t at a pole 1/alpha_k");
    double term = std::pow((1.0 - a[k]) / denom, n);
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      term *= (t * a[k] - a[j]) / (a[k] - a[j]);
    }
    sum += term;
  }
  return sum / n;
}

double u1_density_series(double t, const AlphaSpec& alphas) {
  const int n = alphas.n();
  auto table = table_for(alphas, 256);
  double cumsum = 0.0;  // sum of L^r Lhat^r up to p
  double acc = 0.0;
  double tp = 1.0;
  int quiet = 0;
  for (int p = 0; quiet < 48; ++p) {
    if (p + 2 > table->q_max()) table = table_for(alphas, 2 * table->q_max());
    cumsum += table->ell_product(p);
    double occ = 1.0 - cumsum;
    if (occ < 0.0) occ = 0.0;
    const double term = tp * occ;
    acc += term;
    tp *= t;
    if (p > 8 * n + 32 && std::abs(term) <= 1e-17 * std::max(std::abs(acc), 1e-300))
      ++quiet;
    else
      quiet = 0;
    if (p > 4'000'000)
      throw convergence_error("u1_moment: series did not settle", std::abs(term));
  }
  return acc / n;
}

}  // namespace

double DensityProfile::total() const {
  double s = 0.0;
  for (double v : rho) s += v;
  return s;
}

double u1_moment(double t, const AlphaSpec& alphas) {
  if (!(std::abs(t) < 1.0 / alphas.max_alpha()))
    throw std::domain_error("u1_moment: need |t| < 1/max(alpha)");
  // The closed sum divides by prod(alpha_k - alpha_j); below ~1e-3 spacing it
  // sheds digits fast, while the series route is exact for any alphas.
  if (alphas.pairwise_distinct(1e-3)) return u1_closed_sum(t, alphas);
  return u1_density_series(t, alphas);
}

double density_exact(int p, const AlphaSpec& alphas) {
  if (p < 0) throw std::invalid_argument("density_exact: p must be >= 0");
  const auto table = table_for(alphas, p);
  return occupation(*table, p) / alphas.n();
}

DensityProfile density_profile(const AlphaSpec& alphas, int p_max, double tail_tol) {
  const int n = alphas.n();
  DensityProfile out;
  out.n = n;

  if (p_max >= 0) {
    const auto table = table_for(alphas, p_max);
    out.rho.resize(static_cast<std::size_t>(p_max) + 1);
    double cumsum = 0.0;
    for (int p = 0; p <= p_max; ++p) {
      cumsum += table->ell_product(p);
      double occ = 1.0 - cumsum;
      if (occ < 0.0 && occ > -1e-11) occ = 0.0;
      out.rho[static_cast<std::size_t>(p)] = occ / n;
    }
    out.tail_mass = std::max(0.0, 1.0 - out.total());
    return out;
  }

  // Automatic range: extend until the tabulated mass reaches 1 - tail_tol.
  int cap = std::max(64, 8 * n);
  for (;;) {
    const auto table = table_for(alphas, cap);
    out.rho.clear();
    out.rho.reserve(static_cast<std::size_t>(cap) + 1);
    double cumsum = 0.0;
    double mass = 0.0;
    for (int p = 0; p <= cap; ++p) {
      cumsum += table->ell_product(p);
      double occ = 1.0 - cumsum;
      if (occ < 0.0) occ = 0.0;
      out.rho.push_back(occ / n);
      mass += occ / n;
      if (1.0 - mass < tail_tol && occ / n < tail_tol) {
        out.tail_mass = std::max(0.0, 1.0 - mass);
        return out;
      }
    }
    if (cap > 2'000'000)
      throw cost_error("density_profile: mass did not concentrate below cap",
                       static_cast<double>(cap));
    cap *= 2;
  }
}

double kernel_r(int p, int q, const AlphaSpec& alphas) {
  if (p < 0 || q < 0) throw std::invalid_argument("kernel_r: p,q must be >= 0");
  const auto table = table_for(alphas, std::max(p, q));
  return kernel_with(*table, p, q, kKernelCalibration);
}

KernelTable kernel_table(const AlphaSpec& alphas, const KernelWindow& window,
                         int threads) {
  if (window.p_lo < 0 || window.q_lo < 0 || window.p_hi < window.p_lo ||
      window.q_hi < window.q_lo)
    throw std::invalid_argument("kernel_table: malformed window");
  const auto table = table_for(alphas, std::max(window.p_hi, window.q_hi));
  KernelTable out;
  out.window = window;
  out.values.assign(static_cast<std::size_t>(window.rows()) * window.cols(), 0.0);
  const int cols = window.cols();
  parallel_for(static_cast<std::int64_t>(window.rows()) * cols,
               resolve_threads(threads), [&](std::int64_t idx) {
                 const int p = window.p_lo + static_cast<int>(idx) / cols;
                 const int q = window.q_lo + static_cast<int>(idx) % cols;
                 out.values[static_cast<std::size_t>(idx)] =
                     kernel_with(*table, p, q, kKernelCalibration);
               });
  return out;
}

double pair_correlator(int p, int q, const AlphaSpec& alphas) {
  if (p < 0 || q < 0) throw std::invalid_argument("pair_correlator: p,q must be >= 0");
  const auto table = table_for(alphas, std::max(p, q));
  if (p == q) {
    // n_p is 0/1, so the connected diagonal is the Bernoulli variance.
    const double occ = occupation(*table, p);
    return occ * (1.0 - occ);
  }
  return -kernel_with(*table, p, q, kKernelCalibration) *
         kernel_with(*table, q, p, kKernelCalibration);
}

double connected_k2(double t1, double t2, const AlphaSpec& alphas) {
  if (!alphas.pairwise_distinct())
    throw std::domain_error("connected_k2: requires pairwise-distinct alphas");
  const auto& a = alphas.values();
  const int n = alphas.n();
  const double u1_1 = u1_moment(t1, alphas);
  const double u1_2 = u1_moment(t2, alphas);

  double u2 = 0.0;
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (k == l) continue;
      const double d1 = t1 * a[k] - a[l];
      const double d2 = a[k] - t2 * a[l];
      if (std::abs(d1) < 1e-12 || std::abs(d2) < 1e-12)
        throw std::domain_error("connected_k2: t_i alpha_k = alpha_l pole");
      double term = (t1 * a[k] - t2 * a[l]) * (a[k] - a[l]) / (d1 * d2);
      term *= std::pow((1.0 - a[k]) / (1.0 - a[k] * t1), n);
      term *= std::pow((1.0 - a[l]) / (1.0 - a[l] * t2), n);
      for (int m = 0; m < n; ++m) {
        if (m != k) term *= (a[m] - t1 * a[k]) / (a[m] - a[k]);
        if (m != l) term *= (a[m] - t2 * a[l]) / (a[m] - a[l]);
      }
      u2 += term;
    }
  }
  u2 /= static_cast<double>(n) * n;
  return u2 - u1_1 * u1_2;
}

namespace {

struct CalibrationFixture {
  AlphaSpec a1 = AlphaSpec::equal(0.5, 1);
  AlphaSpec a2 = AlphaSpec::from_values({0.5, 0.25});
  std::shared_ptr<const EllTable> t1, t2;
  EnumerationResult oracle2;

  CalibrationFixture()
      : t1(table_for(a1, 24)),
        t2(table_for(a2, 24)),
        oracle2([this] {
          EnumerationOptions opts;
          opts.h_max = 90;
          opts.pair_window = 12;
          return enumerate_measure(a2, opts);
        }()) {}
};

const CalibrationFixture& fixture() {
  static CalibrationFixture f;
  return f;
}

}  // namespace

DensityCalibration calibrate_density_convention() {
  const auto& f = fixture();
  double best_err = 1e300;
  DensityCalibration best{0, 0, 0, 0};
  for (int sign : {-1, 1}) {
    for (int de = -1; de <= 1; ++de) {
      for (int dh = -1; dh <= 1; ++dh) {
        for (int add = -1; add <= 1; ++add) {
          const DensityCalibration cand{sign, de, dh, add};
          double err = 0.0;
          for (int p = 0; p <= 14; ++p) {
            const double exact = 0.5 * std::pow(0.5, p);  // (1-a) a^p at a=1/2
            err = std::max(err, std::abs(occupation_with(*f.t1, p, cand) - exact));
          }
          for (int p = 0; p <= 12; ++p) {
            const double exact = 2.0 * f.oracle2.density[static_cast<std::size_t>(p)];
            err = std::max(err, std::abs(occupation_with(*f.t2, p, cand) - exact));
          }
          if (err < best_err) {
            best_err = err;
            best = cand;
          }
        }
      }
    }
  }
  if (best_err > 1e-9)
    throw convergence_error("density calibration found no matching convention",
                            best_err);
  return best;
}

KernelCalibration calibrate_kernel_convention() {
  const auto& f = fixture();
  double best_err = 1e300;
  KernelCalibration best{0, 0, 0};
  for (int sign : {-1, 1}) {
    for (int de = -1; de <= 1; ++de) {
      for (int dh = -1; dh <= 1; ++dh) {
        const KernelCalibration cand{sign, de, dh};
        double err = 0.0;
        // N=1: off-diagonal connected correlator is -rho(p)rho(q), and the
        // diagonal must tie to the density as <n_p> = 1 - R(p,p).
        for (int p = 0; p <= 6; ++p) {
          const double occ_p = 0.5 * std::pow(0.5, p);
          err = std::max(err,
                         std::abs(1.0 - kernel_with(*f.t1, p, p, cand) - occ_p));
          for (int q = 0; q <= 6; ++q) {
            if (p == q) continue;
            const double occ_q = 0.5 * std::pow(0.5, q);
            const double pred = -kernel_with(*f.t1, p, q, cand) *
                                kernel_with(*f.t1, q, p, cand);
            err = std::max(err, std::abs(pred - (-occ_p * occ_q)));
          }
        }
        for (int p = 0; p <= 6; ++p) {
          const double occ_p = 2.0 * f.oracle2.density[static_cast<std::size_t>(p)];
          err = std::max(err,
                         std::abs(1.0 - kernel_with(*f.t2, p, p, cand) - occ_p));
          for (int q = 0; q <= 6; ++q) {
            if (p == q) continue;
            const double pred = -kernel_with(*f.t2, p, q, cand) *
                                kernel_with(*f.t2, q, p, cand);
            err = std::max(err, std::abs(pred - f.oracle2.pair_connected(p, q)));
          }
        }
        if (err < best_err) {
          best_err = err;
          best = cand;
        }
      }
    }
  }
  if (best_err > 1e-9)
    throw convergence_error("kernel calibration found no matching convention",
                            best_err);
  return best;
}

}  // namespace dens
