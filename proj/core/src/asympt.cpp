#include "dens/asympt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "dens/common.hpp"
#include "dens/ell.hpp"
#include "dens/exact_kernel.hpp"

namespace dens {

namespace {

constexpr double kPi = 3.14159265358979323846;

double interp_profile(const DensityProfile& prof, double p_real) {
  // Linear interpolation of N*rho between integer sites; zero beyond range.
  if (p_real <= 0.0) return prof.n * prof.rho.front();
  const int p0 = static_cast<int>(std::floor(p_real));
  if (p0 + 1 > prof.p_max()) return 0.0;
  const double frac = p_real - p0;
  const double lo = prof.n * prof.rho[static_cast<std::size_t>(p0)];
  const double hi = prof.n * prof.rho[static_cast<std::size_t>(p0) + 1];
  return lo + frac * (hi - lo);
}

}  // namespace

ResolventSolver::ResolventSolver(const AlphaSpec& alphas, double imag_offset)
    : alphas_(alphas), offset_(imag_offset) {
  auto fp = [&](double u) {
    // F'(u) = 1/(1-u)^2 + G0(u) + u G0'(u)
    double g0 = 0.0, g0p = 0.0;
    for (double a : alphas_.values()) {
      g0 += 1.0 / (u - a);
      g0p -= 1.0 / ((u - a) * (u - a));
    }
    g0 /= alphas_.n();
    g0p /= alphas_.n();
    return 1.0 / ((1.0 - u) * (1.0 - u)) + g0 + u * g0p;
  };
  auto freal = [&](double u) {
    double g0 = 0.0;
    for (double a : alphas_.values()) g0 += 1.0 / (u - a);
    g0 /= alphas_.n();
    return u / (1.0 - u) + u * g0;
  };
  auto bisect = [&](double lo, double hi) {
    // fp(lo) and fp(hi) must straddle zero.
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (fp(mid) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };

  // Upper edge: critical point between max(alpha) and 1 (F' runs -inf -> +inf).
  const double amax = alphas_.max_alpha();
  const double uc_hi = bisect(amax + 1e-13, 1.0 - 1e-13);
  edges_.upper = freal(uc_hi);

  // Lower edge: critical point on the negative axis (F' runs +... -> -).
  double x = 8.0;
  while (fp(-x) <= 0.0 && x < 1e12) x *= 2.0;
  // fp(-x) > 0, fp(-eps) < 0: bisect with flipped orientation.
  double lo = -x, hi = -1e-12;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fp(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  edges_.lower = freal(0.5 * (lo + hi));
}

std::complex<double> ResolventSolver::g0(std::complex<double> u) const {
  std::complex<double> acc = 0.0;
  for (double a : alphas_.values()) acc += 1.0 / (u - a);
  return acc / static_cast<double>(alphas_.n());
}

std::complex<double> ResolventSolver::f(std::complex<double> u) const {
  return u / (1.0 - u) + u * g0(u);
}

ResolventSolution ResolventSolver::refine(std::complex<double> seed,
                                          double sigma) const {
  const std::complex<double> target(sigma, offset_);
  auto residual = [&](std::complex<double> u) { return f(u) - target; };

  auto secant = [&](std::complex<double> u0) -> std::pair<std::complex<double>, double> {
    std::complex<double> u1 = u0 + 1e-7 * (std::abs(u0) + 0.1) *
                                       std::complex<double>(1.0, 1.0);
    std::complex<double> r0 = residual(u0), r1 = residual(u1);
    for (int it = 0; it < 200; ++it) {
      if (std::abs(r1) < 1e-13 * (1.0 + std::abs(target))) break;
      const std::complex<double> dr = r1 - r0;
      if (std::abs(dr) == 0.0) break;
      const std::complex<double> u2 = u1 - r1 * (u1 - u0) / dr;
      u0 = u1;
      r0 = r1;
      u1 = u2;
      r1 = residual(u1);
    }
    return {u1, std::abs(r1)};
  };

  auto [u, res] = secant(seed);
  // Physical branch: Im G >= 0 on the +i0 side. A conjugate-root capture
  // shows up as a clearly negative Im log u.
  if (std::imag(std::log(u)) < -1e-6) {
    auto [u2, res2] = secant(std::conj(u));
    if (res2 < 1e-10 && std::imag(std::log(u2)) >= -1e-6) {
      u = u2;
      res = res2;
    }
  }
  if (!(res < 1e-9 * (1.0 + std::abs(target))))
    throw convergence_error("resolvent root finder stalled at sigma=" +
                                std::to_string(sigma) + " |residual|=" +
                                std::to_string(res),
                            res);
  ResolventSolution sol;
  sol.sigma = sigma;
  sol.u = u;
  sol.g = std::log(u);
  sol.rho = std::clamp(std::imag(sol.g) / kPi, 0.0, 1.0);
  sol.residual = res;
  return sol;
}

ResolventSolution ResolventSolver::solve(double sigma) const {
  if (!(sigma > 0.0)) throw std::invalid_argument("solve_resolvent: sigma must be > 0");
  return solve_grid({sigma}).front();
}

std::vector<ResolventSolution> ResolventSolver::solve_grid(
    const std::vector<double>& sigmas) const {
  if (sigmas.empty()) return {};
  for (double s : sigmas)
    if (!(s > 0.0)) throw std::invalid_argument("solve_grid: sigma must be > 0");

  std::vector<std::size_t> order(sigmas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sigmas[a] > sigmas[b]; });

  const double top = std::max({8.0, 4.0 * edges_.upper, 2.0 * sigmas[order[0]]});
  double g0_at_1 = 0.0;
  for (double a : alphas_.values()) g0_at_1 += 1.0 / (1.0 - a);
  g0_at_1 /= alphas_.n();

  // March down from the asymptotic regime, reseeding with each accepted root.
  std::complex<double> seed = 1.0 - 1.0 / (top + 1.0 - g0_at_1);
  std::vector<ResolventSolution> out(sigmas.size());
  double current = top;
  ResolventSolution last = refine(seed, current);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const double target = sigmas[order[oi]];
    // Geometric descent with enough steps to track the branch around the edge.
    while (current > target * 1.0001) {
      current = std::max(target, current * 0.97);
      last = refine(last.u, current);
    }
    if (current != target) last = refine(last.u, target);
    current = target;
    out[order[oi]] = last;
  }
  return out;
}

ResolventSolution solve_resolvent(double sigma, const AlphaSpec& alphas) {
  return ResolventSolver(alphas).solve(sigma);
}

LimitShape::LimitShape(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("LimitShape: alpha must lie in (0,1)");
  const double r = std::sqrt(alpha);
  a_ = (1.0 + r) / (1.0 - r);
  b_ = (1.0 - r) / (1.0 + r);
}

double LimitShape::density(double sigma) const {
  if (sigma <= b_) return sigma < 0.0 ? 0.0 : 1.0;
  if (sigma >= a_) return 0.0;
  return (2.0 / kPi) * std::atan(std::sqrt(b_ * (a_ - sigma) / (a_ * (sigma - b_))));
}

double LimitShape::density_log_form(double sigma) const {
  if (sigma <= b_) return sigma < 0.0 ? 0.0 : 1.0;
  if (sigma >= a_) return 0.0;
  // arg of the physical root of the quadratic; the plateau/edge limits pi and 0.
  const double im = (1.0 - alpha_) * std::sqrt((a_ - sigma) * (sigma - b_));
  const double re = (1.0 + alpha_) * sigma - (1.0 - alpha_);
  return std::atan2(im, re) / kPi;
}

std::complex<double> LimitShape::resolvent_exp(std::complex<double> z) const {
  // sqrt(z-a)sqrt(z-b) carries the correct cut structure on [b,a] for
  // Im z >= 0 and behaves like +z at infinity.
  const std::complex<double> root = std::sqrt(z - a_) * std::sqrt(z - b_);
  return ((1.0 + alpha_) * z - (1.0 - alpha_) - (1.0 - alpha_) * root) /
         (2.0 * alpha_ * z);
}

LimitShape limit_shape_equal(double alpha) { return LimitShape(alpha); }

BulkComparison finite_n_vs_limit(double alpha, int n, double margin,
                                 double bulk_floor) {
  if (n < 16) throw std::invalid_argument("finite_n_vs_limit: need n >= 16");
  const LimitShape shape(alpha);
  const AlphaSpec alphas = AlphaSpec::equal(alpha, n);
  const int p_max = static_cast<int>(std::ceil(shape.a() * n)) + 4;
  const DensityProfile prof = density_profile(alphas, p_max);

  BulkComparison cmp;
  cmp.n = n;
  cmp.margin = margin;
  cmp.plateau_collar = margin * std::pow(n, -2.0 / 3.0);
  cmp.bulk_collar = std::max(cmp.plateau_collar, bulk_floor);
  cmp.bulk_lo = static_cast<int>(std::ceil(n * (shape.b() + cmp.bulk_collar)));
  cmp.bulk_hi = static_cast<int>(std::floor(n * (shape.a() - cmp.bulk_collar)));
  for (int p = cmp.bulk_lo; p <= cmp.bulk_hi; ++p) {
    const double diff = std::abs(n * prof.rho[static_cast<std::size_t>(p)] -
                                 shape.density(static_cast<double>(p) / n));
    if (diff > cmp.sup_norm) {
      cmp.sup_norm = diff;
      cmp.argmax_p = p;
    }
  }
  const int plateau_hi =
      static_cast<int>(std::floor(n * (shape.b() - cmp.plateau_collar)));
  for (int p = 0; p <= plateau_hi; ++p)
    cmp.plateau_min =
        std::min(cmp.plateau_min, n * prof.rho[static_cast<std::size_t>(p)]);
  return cmp;
}

namespace {

double simpson(const std::function<double(double)>& fn, double lo, double hi,
               double f_lo, double f_mid, double f_hi, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + mid), mh = 0.5 * (mid + hi);
  const double f_lm = fn(lm), f_mh = fn(mh);
  const double whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi);
  const double left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid);
  const double right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_mh + f_hi);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(fn, lo, mid, f_lo, f_lm, f_mid, tol / 2, depth - 1) +
         simpson(fn, mid, hi, f_mid, f_mh, f_hi, tol / 2, depth - 1);
}

double adaptive_quad(const std::function<double(double)>& fn, double lo, double hi,
                     double tol) {
  const double mid = 0.5 * (lo + hi);
  return simpson(fn, lo, hi, fn(lo), fn(mid), fn(hi), tol, 48);
}

}  // namespace

double scaling_integral(double x, double b) {
  if (!(b > 0.0)) throw std::invalid_argument("scaling_integral: b must be > 0");
  // theta = s^2 removes the theta^{-1/2} singularity.
  auto integrand = [&](double s) {
    return std::exp(-x * s * s - b * std::pow(s, 6.0));
  };
  double upper = std::pow(80.0 / b, 1.0 / 6.0);
  while (-x * upper * upper - b * std::pow(upper, 6.0) > -80.0) upper *= 1.5;
  // Split at 1 to give the adaptive rule a hand near the origin.
  const double cut = std::min(1.0, upper);
  return 2.0 * (adaptive_quad(integrand, 0.0, cut, 1e-12) +
                adaptive_quad(integrand, cut, upper, 1e-12));
}

EdgeScalingReport edge_scaling_check(double alpha, const std::vector<int>& n_list,
                                     double x_lo, double x_hi) {
  if (n_list.size() < 2)
    throw std::invalid_argument("edge_scaling_check: need at least two sizes");
  const LimitShape shape(alpha);
  EdgeScalingReport rep;
  rep.exponent_window_lo = 1e-4;
  rep.exponent_window_hi = 1e-2;

  {  // log-log fit of the vanishing density against distance from the edge
    const int m = 40;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
      const double t = static_cast<double>(i) / (m - 1);
      const double d = rep.exponent_window_lo *
                       std::pow(rep.exponent_window_hi / rep.exponent_window_lo, t);
      const double lx = std::log(d);
      const double ly = std::log(shape.density(shape.a() - d));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    rep.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    if (!std::isfinite(rep.exponent))
      throw std::invalid_argument("edge_scaling_check: degenerate fit window");
  }

  // Rescaled finite-N profiles F_n(x) = n^{1/3} N rho at p = a n + x n^{1/3}.
  struct Profile {
    int n;
    DensityProfile prof;
    double cbrt_n;
  };
  std::vector<Profile> profs;
  for (int n : n_list) {
    const int p_max =
        static_cast<int>(std::ceil(shape.a() * n + 1.6 * x_hi * std::cbrt(n))) + 8;
    profs.push_back({n, density_profile(AlphaSpec::equal(alpha, n), p_max),
                     std::cbrt(static_cast<double>(n))});
  }
  auto profile_at = [&](const Profile& pr, double x) {
    const double p_real = shape.a() * pr.n + x * pr.cbrt_n;
    return pr.cbrt_n * interp_profile(pr.prof, p_real);
  };

  const double step = 0.125;
  std::vector<double> grid;
  for (double x = x_lo; x <= x_hi + 1e-12; x += step) grid.push_back(x);

  for (std::size_t i = 0; i + 1 < profs.size(); ++i) {
    const Profile& small = profs[i];
    const Profile& large = profs[i + 1];
    double ref_scale = 0.0;
    std::vector<double> target(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      target[g] = profile_at(large, grid[g]);
      ref_scale = std::max(ref_scale, std::abs(target[g]));
    }
    auto distance = [&](double sf, double sx2) {
      double worst = 0.0;
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const double v = sf * profile_at(small, sx2 * grid[g]);
        worst = std::max(worst, std::abs(v - target[g]));
      }
      return worst / ref_scale;
    };
    // Coarse-to-fine affine alignment; the scaling form only promises shape.
    double best_sf = 1.0, best_sx = 1.0, best = distance(1.0, 1.0);
    double span = 0.3;
    for (int round = 0; round < 4; ++round) {
      const int steps = 13;
      const double sf0 = best_sf, sx0 = best_sx;
      for (int a_i = 0; a_i < steps; ++a_i) {
        for (int b_i = 0; b_i < steps; ++b_i) {
          const double sf = sf0 + span * (2.0 * a_i / (steps - 1) - 1.0);
          const double sx = sx0 + span * (2.0 * b_i / (steps - 1) - 1.0);
          if (sf <= 0.2 || sx <= 0.2) continue;
          const double d = distance(sf, sx);
          if (d < best) {
            best = d;
            best_sf = sf;
            best_sx = sx;
          }
        }
      }
      span /= 5.0;
    }
    rep.collapses.push_back({small.n, large.n, best, best_sf, best_sx});
  }

  for (double x = -4.0; x <= 8.0 + 1e-12; x += 0.5) {
    rep.scaling_x.push_back(x);
    rep.scaling_profile.push_back(scaling_integral(x));
  }
  return rep;
}

SineKernelReport sine_kernel_check(double alpha, int n, int center_p,
                                   const std::vector<int>& separations) {
  if (n < 16) throw std::invalid_argument("sine_kernel_check: need n >= 16");
  if (separations.empty())
    throw std::invalid_argument("sine_kernel_check: no separations");
  const LimitShape shape(alpha);
  const AlphaSpec alphas = AlphaSpec::equal(alpha, n);
  const int p_max = static_cast<int>(std::ceil(shape.a() * n)) + 8;
  const DensityProfile prof = density_profile(alphas, p_max);

  SineKernelReport rep;
  if (center_p < 0) {
    // Bulk default: the site where half the occupation bound is used.
    double best = 1e300;
    for (int p = 0; p <= prof.p_max(); ++p) {
      const double d = std::abs(n * prof.rho[static_cast<std::size_t>(p)] - 0.5);
      if (d < best) {
        best = d;
        center_p = p;
      }
    }
  }
  if (center_p < 0 || center_p > prof.p_max() ||
      n * prof.rho[static_cast<std::size_t>(center_p)] < 1e-6)
    throw std::invalid_argument("sine_kernel_check: center outside the support");
  rep.center_p = center_p;
  rep.rho_bar = n * prof.rho[static_cast<std::size_t>(center_p)];

  auto predicted_raw = [&](int s) {
    const double sn = std::sin(kPi * rep.rho_bar * s);
    return sn * sn / (static_cast<double>(s) * s);
  };
  // Normalize at the first separation where the prediction has real support.
  int s_ref = separations.front();
  for (int s : separations) {
    if (predicted_raw(s) > 0.1 * predicted_raw(separations.front()) ||
        predicted_raw(s) > 0.05) {
      s_ref = s;
      break;
    }
  }
  rep.reference_separation = s_ref;
  const double m_ref = std::abs(pair_correlator(center_p, center_p + s_ref, alphas));
  const double p_ref = predicted_raw(s_ref);

  for (int s : separations) {
    SineKernelRow row;
    row.separation = s;
    row.measured = std::abs(pair_correlator(center_p, center_p + s, alphas)) / m_ref;
    row.predicted = predicted_raw(s) / p_ref;
    if (row.predicted > 0.01) {
      row.relative = true;
      row.deviation = std::abs(row.measured - row.predicted) / row.predicted;
    } else {
      row.relative = false;
      row.deviation = std::abs(row.measured - row.predicted);
    }
    rep.rows.push_back(row);
  }

  // Saturated region: every integer separation should decorrelate.
  rep.saturated_p = std::max(1, static_cast<int>(std::lround(0.5 * shape.b() * n)));
  for (int s : separations)
    rep.saturated_max_abs =
        std::max(rep.saturated_max_abs,
                 std::abs(pair_correlator(rep.saturated_p, rep.saturated_p + s, alphas)));
  return rep;
}

double small_weight_density(int p, double rho) {
  if (p < 0) throw std::invalid_argument("small_weight_density: p must be >= 0");
  if (!(rho > 0.0)) throw std::invalid_argument("small_weight_density: rho must be > 0");
  double sum_sq = 0.0;
  for (int r = 0; r <= p; ++r) {
    const double m = laguerre_m(r, rho);
    sum_sq += m * m;
  }
  const double v = 1.0 - std::exp(-rho) * sum_sq;
  return std::clamp(v, 0.0, 1.0);
}

double small_weight_correlator(int p, int q, double rho) {
  if (p < 0 || q < 0)
    throw std::invalid_argument("small_weight_correlator: p,q must be >= 0");
  const int m = std::min(p, q);
  double sum = 0.0;
  for (int k = 0; k <= m; ++k)
    sum += laguerre_m(p - k, rho) * laguerre_m(q - k, rho);
  return sum;
}

}  // namespace dens
