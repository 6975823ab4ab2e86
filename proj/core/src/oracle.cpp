#include "dens/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dens/charpoly.hpp"
#include "dens/common.hpp"

namespace dens {

namespace {

double binomial_estimate(int top, int k) {
  if (k > top) return 0.0;
  return std::exp(std::lgamma(top + 1.0) - std::lgamma(k + 1.0) -
                  std::lgamma(top - k + 1.0));
}

double config_weight(const Levels& h, const AlphaSpec& alphas,
                     CharacterBackend backend) {
  const LevelConfig cfg{Levels(h)};
  switch (backend) {
    case CharacterBackend::determinant:
      return vandermonde_abs(h) * character_det(cfg, alphas);
    case CharacterBackend::gelfand_tseytlin:
      return vandermonde_abs(h) * character_gt(cfg.weights(), alphas);
    case CharacterBackend::equal_alpha: {
      double mean = 0.0;
      for (double a : alphas.values()) mean += a;
      return vandermonde_abs(h) * character_equal(cfg, mean / alphas.n());
    }
    case CharacterBackend::automatic:
    default:
      return measure_weight(cfg, alphas);
  }
}

struct ShellAccumulator {
  double z = 0.0;
  double configs = 0.0;
  std::vector<double> occupation;  // unnormalized <n_p>
  std::vector<double> pair;        // unnormalized <n_p n_q>, p != q only
};

// Sum every strictly decreasing tuple with fixed leading level h1.
void enumerate_shell(int h1, const AlphaSpec& alphas, CharacterBackend backend,
                     int pair_window, ShellAccumulator& acc) {
  const int n = alphas.n();
  Levels h(static_cast<std::size_t>(n));
  h[0] = h1;
  const int w = pair_window;

  auto deposit = [&](double weight) {
    acc.z += weight;
    acc.configs += 1.0;
    for (int k = 0; k < n; ++k) {
      acc.occupation[static_cast<std::size_t>(h[k])] += weight;
      if (h[k] <= w) {
        for (int l = k + 1; l < n; ++l) {
          if (h[l] <= w) {
            acc.pair[static_cast<std::size_t>(h[k]) * (w + 1) + h[l]] += weight;
            acc.pair[static_cast<std::size_t>(h[l]) * (w + 1) + h[k]] += weight;
          }
        }
      }
    }
  };

  if (n == 1) {
    deposit(config_weight(h, alphas, backend));
    return;
  }

  std::function<void(int)> rec = [&](int pos) {
    if (pos == n) {
      deposit(config_weight(h, alphas, backend));
      return;
    }
    // Leave room for the remaining strictly smaller levels.
    for (std::int64_t v = h[pos - 1] - 1; v >= n - 1 - pos; --v) {
      h[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1);
    }
  };
  rec(1);
}

}  // namespace

double EnumerationResult::occupation(int p) const {
  if (p < 0 || p > h_max) return 0.0;
  return n * density[static_cast<std::size_t>(p)];
}

double EnumerationResult::pair_connected(int p, int q) const {
  if (p == q) {
    const double occ = occupation(p);
    return occ - occ * occ;  // n_p is 0/1
  }
  if (p < 0 || q < 0 || p > pair_window || q > pair_window)
    throw std::out_of_range("pair_connected: outside tabulated window");
  const double raw = pair_raw[static_cast<std::size_t>(p) * (pair_window + 1) + q];
  return raw - occupation(p) * occupation(q);
}

double EnumerationResult::u1(double t) const {
  double acc = 0.0, tp = 1.0;
  for (int p = 0; p <= h_max; ++p) {
    acc += tp * occupation(p);
    tp *= t;
  }
  return acc / n;
}

double EnumerationResult::u2(double t1, double t2) const {
  double acc = 0.0;
  for (int p = 0; p <= pair_window; ++p) {
    for (int q = 0; q <= pair_window; ++q) {
      if (p == q) continue;
      acc += std::pow(t1, p) * std::pow(t2, q) *
             pair_raw[static_cast<std::size_t>(p) * (pair_window + 1) + q];
    }
  }
  return acc / (static_cast<double>(n) * n);
}

double EnumerationResult::k2(double t1, double t2) const {
  return u2(t1, t2) - u1(t1) * u1(t2);
}

EnumerationResult enumerate_measure(const AlphaSpec& alphas,
                                    const EnumerationOptions& opts) {
  const int n = alphas.n();
  if (opts.h_max < n - 1)
    throw std::invalid_argument("enumerate_measure: h_max too small to order N levels");
  const double est = binomial_estimate(opts.h_max + 1, n);
  if (est > opts.budget)
    throw cost_error("enumerate_measure: estimated " + std::to_string(est) +
                         " configurations exceeds budget",
                     est);

  CharacterBackend backend = opts.backend;
  if (backend == CharacterBackend::determinant && !alphas.pairwise_distinct())
    throw std::domain_error(
        "enumerate_measure: determinant backend needs distinct alphas");

  const int w = opts.pair_window >= 0 ? std::min(opts.pair_window, opts.h_max)
                                      : std::min(opts.h_max, 64);

  const int shells = opts.h_max - (n - 1) + 1;
  std::vector<ShellAccumulator> acc(static_cast<std::size_t>(shells));
  for (auto& a : acc) {
    a.occupation.assign(static_cast<std::size_t>(opts.h_max) + 1, 0.0);
    a.pair.assign(static_cast<std::size_t>(w + 1) * (w + 1), 0.0);
  }

  parallel_for(shells, resolve_threads(opts.threads), [&](std::int64_t i) {
    enumerate_shell(n - 1 + static_cast<int>(i), alphas, backend, w,
                    acc[static_cast<std::size_t>(i)]);
  });

  EnumerationResult out;
  out.n = n;
  out.h_max = opts.h_max;
  out.pair_window = w;
  out.density.assign(static_cast<std::size_t>(opts.h_max) + 1, 0.0);
  out.pair_raw.assign(static_cast<std::size_t>(w + 1) * (w + 1), 0.0);
  out.shell_mass.reserve(acc.size());
  for (const auto& a : acc) {  // fixed merge order: deterministic totals
    out.z += a.z;
    out.config_count += a.configs;
    out.shell_mass.push_back(a.z);
    for (std::size_t p = 0; p < out.density.size(); ++p)
      out.density[p] += a.occupation[p];
    for (std::size_t i = 0; i < out.pair_raw.size(); ++i)
      out.pair_raw[i] += a.pair[i];
  }
  if (!(out.z > 0.0))
    throw std::runtime_error("enumerate_measure: truncated Z is not positive");

  for (auto& v : out.density) v /= out.z * n;
  for (auto& v : out.pair_raw) v /= out.z;

  // Conservative tail: shells decay roughly geometrically with ratio ->
  // max(alpha); extrapolate from the last two shells and pad 10x.
  if (out.shell_mass.size() >= 2) {
    const double last = out.shell_mass.back();
    const double prev = out.shell_mass[out.shell_mass.size() - 2];
    double r = prev > 0.0 ? last / prev : alphas.max_alpha();
    r = std::clamp(r, 1e-6, 0.999);
    r = std::max(r, alphas.max_alpha());  // never extrapolate faster than alpha_max
    out.tail_estimate = 10.0 * (last * r / (1.0 - r)) / out.z;
  } else {
    out.tail_estimate = 1.0;
  }
  return out;
}

}  // namespace dens
