#include "dens/validate.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>

#include "dens/asympt.hpp"
#include "dens/charpoly.hpp"
#include "dens/ell.hpp"
#include "dens/exact_kernel.hpp"
#include "dens/gt.hpp"
#include "dens/mcmc.hpp"
#include "dens/oracle.hpp"

namespace dens {

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

struct Check {
  bool ok = true;
  double worst = 0.0;
  void fold(double err, double tol) {
    worst = std::max(worst, err);
    if (!(err <= tol)) ok = false;
  }
};

// ---- criterion 1: closed formulas vs the enumeration oracle ---------------

CriterionResult criterion_oracle_equivalence(int threads) {
  CriterionResult r;
  r.id = 1;
  r.name = "oracle equivalence (density & pair vs enumeration)";
  struct Case {
    AlphaSpec alphas;
    int h_max;
  };
  const std::vector<Case> cases = {
      {AlphaSpec::from_values({0.5}), 80},
      {AlphaSpec::from_values({0.5, 0.25}), 90},
      {AlphaSpec::from_values({0.2, 0.4, 0.6}), 95},
      {AlphaSpec::equal(0.3, 3), 85},
  };
  Check density_chk, pair_chk;
  double worst_tail = 0.0;
  for (const auto& c : cases) {
    EnumerationOptions opts;
    opts.h_max = c.h_max;
    opts.pair_window = 10;
    opts.threads = threads;
    const EnumerationResult oracle = enumerate_measure(c.alphas, opts);
    worst_tail = std::max(worst_tail, oracle.tail_estimate);
    if (oracle.tail_estimate > 1e-12) density_chk.ok = false;
    for (int p = 0; p <= 30; ++p)
      density_chk.fold(std::abs(density_exact(p, c.alphas) -
                                oracle.density[static_cast<std::size_t>(p)]),
                       1e-10);
    for (int p = 0; p <= 10; ++p)
      for (int q = 0; q <= 10; ++q)
        pair_chk.fold(std::abs(pair_correlator(p, q, c.alphas) -
                               oracle.pair_connected(p, q)),
                      1e-10);
  }
  r.passed = density_chk.ok && pair_chk.ok;
  r.detail = fmt("max|rho-oracle|=%.2e max|pair-oracle|=%.2e max tail=%.1e",
                 density_chk.worst, pair_chk.worst, worst_tail);
  return r;
}

// ---- criterion 2: character triple agreement -------------------------------

void for_each_weight_vector(int n, int max_entry,
                            const std::function<void(const Weights&)>& fn) {
  Weights w(static_cast<std::size_t>(n));
  std::function<void(int, std::int64_t)> rec = [&](int pos, std::int64_t hi) {
    if (pos == n) {
      fn(w);
      return;
    }
    for (std::int64_t v = hi; v >= 0; --v) {
      w[static_cast<std::size_t>(pos)] = v;
      rec(pos + 1, v);
    }
  };
  rec(0, max_entry);
}

CriterionResult criterion_characters() {
  CriterionResult r;
  r.id = 2;
  r.name = "character triple agreement (GT / determinant / equal)";
  const std::vector<double> pool = {0.15, 0.35, 0.55, 0.75};
  Check chk;
  std::int64_t reps = 0;
  for (int n = 1; n <= 4; ++n) {
    const AlphaSpec distinct =
        AlphaSpec::from_values({pool.begin(), pool.begin() + n});
    const AlphaSpec ones_like = AlphaSpec::equal(0.7, n);
    for_each_weight_vector(n, 6, [&](const Weights& w) {
      ++reps;
      const LevelConfig cfg = LevelConfig::from_weights(w);
      const double gt = character_gt(w, distinct);
      const double det = character_det(cfg, distinct);
      chk.fold(std::abs(gt - det) / std::abs(gt), 1e-10);

      const double dim = dimension(w);
      const double count = static_cast<double>(gt_pattern_count(w));
      chk.fold(std::abs(dim - count), 1e-9);

      const double gt_eq = character_gt(w, ones_like);
      const double eq = character_equal(cfg, 0.7);
      chk.fold(std::abs(gt_eq - eq) / std::abs(eq), 1e-10);
    });
  }
  r.passed = chk.ok;
  r.detail = fmt("%lld weight vectors, worst rel dev=%.2e",
                 static_cast<long long>(reps), chk.worst);
  return r;
}

// ---- criterion 3: normalization and occupation bound ------------------------

CriterionResult criterion_normalization() {
  CriterionResult r;
  r.id = 3;
  r.name = "normalization and occupation bounds (N<=10)";
  Check chk;
  double worst_occ = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const AlphaSpec alphas = AlphaSpec::equal(0.25, n);
    const DensityProfile prof = density_profile(alphas);
    chk.fold(std::abs(prof.total() - 1.0), 1e-8);
    for (double rho : prof.rho) {
      const double occ = n * rho;
      worst_occ = std::max(worst_occ, occ);
      if (occ < 0.0 || occ > 1.0 + 1e-10) chk.ok = false;
    }
  }
  r.passed = chk.ok;
  r.detail = fmt("max|sum rho - 1|=%.2e max occupation=%.12f", chk.worst, worst_occ);
  return r;
}

// ---- criteria 4 & 5: limit shape and saturation ----------------------------

CriterionResult criterion_limit_shape() {
  CriterionResult r;
  r.id = 4;
  r.name = "limit shape endpoints and bulk convergence";
  const LimitShape shape(0.25);
  const bool endpoints_ok =
      std::abs(shape.a() - 3.0) < 1e-14 && std::abs(shape.b() - 1.0 / 3.0) < 1e-14;
  const BulkComparison c64 = finite_n_vs_limit(0.25, 64);
  const BulkComparison c128 = finite_n_vs_limit(0.25, 128);
  const double ratio = c64.sup_norm / c128.sup_norm;
  r.passed = endpoints_ok && c64.sup_norm < 0.02 && ratio >= 1.5;
  r.detail = fmt("a=%.15f b=%.15f sup64=%.3e sup128=%.3e ratio=%.2f", shape.a(),
                 shape.b(), c64.sup_norm, c128.sup_norm, ratio);
  return r;
}

CriterionResult criterion_plateau() {
  CriterionResult r;
  r.id = 5;
  r.name = "saturation plateau at N=128";
  const BulkComparison cmp = finite_n_vs_limit(0.25, 128, 3.0);
  r.passed = cmp.plateau_min >= 0.99;
  r.detail = fmt("min N*rho on plateau=%.6f (threshold 0.99)", cmp.plateau_min);
  return r;
}

// ---- criterion 6: two derivations of the limit density ----------------------

CriterionResult criterion_two_forms() {
  CriterionResult r;
  r.id = 6;
  r.name = "arctan form vs resolvent log-form";
  const LimitShape shape(0.25);
  Check chk;
  const int grid = 2000;
  const double lo = shape.b() + 1e-3, hi = shape.a() - 1e-3;
  for (int i = 0; i <= grid; ++i) {
    const double s = lo + (hi - lo) * i / grid;
    chk.fold(std::abs(shape.density(s) - shape.density_log_form(s)), 1e-10);
  }
  r.passed = chk.ok;
  r.detail = fmt("max pointwise gap=%.2e on (b+1e-3, a-1e-3)", chk.worst);
  return r;
}

// ---- criterion 7: edge scaling ----------------------------------------------

CriterionResult criterion_edge() {
  CriterionResult r;
  r.id = 7;
  r.name = "edge exponent and N^{2/3} collapse";
  const EdgeScalingReport rep = edge_scaling_check(0.25, {64, 128});
  const double exp_err = std::abs(rep.exponent - 0.5);
  const double dist = rep.collapses.front().distance;
  bool integral_monotone = true;
  for (std::size_t i = 1; i < rep.scaling_profile.size(); ++i)
    if (rep.scaling_x[i] >= 0.0 && rep.scaling_profile[i] > rep.scaling_profile[i - 1])
      integral_monotone = false;
  r.passed = exp_err <= 0.02 && dist <= 0.10 && integral_monotone;
  r.detail = fmt("exponent=%.4f collapse(64,128)=%.3f scaling integral monotone=%s",
                 rep.exponent, dist, integral_monotone ? "yes" : "no");
  return r;
}

// ---- criterion 8: sine-kernel universality -----------------------------------

CriterionResult criterion_sine() {
  CriterionResult r;
  r.id = 8;
  r.name = "sine-kernel shape in the bulk; saturated decorrelation";
  const SineKernelReport rep = sine_kernel_check(0.25, 128);
  Check chk;
  for (const auto& row : rep.rows) {
    if (row.relative)
      chk.fold(row.deviation, 0.05);
    else
      chk.fold(row.deviation, 5e-3);
  }
  const bool saturated_ok = rep.saturated_max_abs < 1e-3;
  r.passed = chk.ok && saturated_ok;
  r.detail = fmt("center p=%d rho_bar=%.4f worst dev=%.3e saturated max=%.2e",
                 rep.center_p, rep.rho_bar, chk.worst, rep.saturated_max_abs);
  return r;
}

// ---- criterion 9: small-weight limit -----------------------------------------

CriterionResult criterion_small_weights() {
  CriterionResult r;
  r.id = 9;
  r.name = "small-weight limit (finite-N bridge; small-rho expansion)";
  Check bridge;
  {
    const double rho = 0.5;
    const int n = 200;
    const AlphaSpec alphas = AlphaSpec::equal(1.0 - rho / n, n);
    for (int p = 0; p <= 10; ++p)
      bridge.fold(std::abs(n * density_exact(p, alphas) - small_weight_density(p, rho)),
                  5e-3);
  }
  Check expansion;
  {
    const double rho = 1e-3;
    for (int p = 0; p <= 10; ++p)
      expansion.fold(std::abs(small_weight_density(p, rho) -
                              (rho - (p + 1) * rho * rho)),
                     1e-8);
  }
  r.passed = bridge.ok && expansion.ok;
  r.detail = fmt("bridge max dev=%.2e (tol 5e-3); expansion max dev vs rho-(p+1)rho^2=%.2e (tol 1e-8)",
                 bridge.worst, expansion.worst);
  if (!expansion.ok) {
    r.note =
        "the stated target rho-(p+1)rho^2 is the expansion of the staggered "
        "Laguerre sum, which the finite-N bridge rules out; the implemented "
        "P_inf expands as rho-(p+1/2)rho^2, so the gap sits at rho^2/2";
  }
  return r;
}

// ---- criterion 10: MCMC consistency ------------------------------------------

CriterionResult criterion_mcmc() {
  CriterionResult r;
  r.id = 10;
  r.name = "MCMC reproduces the exact density (N=32)";
  const AlphaSpec alphas = AlphaSpec::equal(0.25, 32);
  McmcOptions opts;
  opts.steps = 1'000'000;
  opts.seed = 12345;
  McmcChain chain(alphas, opts);
  chain.run();
  const DensityEstimate est = estimate_density(chain);
  const DensityProfile exact = density_profile(alphas);

  // Saturated sites are occupied in every sample, so their jackknife sigma is
  // exactly zero while the exact occupation differs from 1 by ~e^{-cN}; allow
  // one-count resolution on top of the 3-sigma band.
  const double resolution = 1.0 / (static_cast<double>(chain.samples()) * 32.0);
  Check chk;
  double worst_pull = 0.0;
  int sites = 0;
  for (int p = 0; p <= exact.p_max(); ++p) {
    const double occ = 32.0 * exact.rho[static_cast<std::size_t>(p)];
    if (occ <= 1e-3) continue;
    ++sites;
    const double mc =
        p <= est.profile.p_max() ? est.profile.rho[static_cast<std::size_t>(p)] : 0.0;
    const double sigma = p < static_cast<int>(est.sigma.size()) ? est.sigma[p] : 0.0;
    const double diff = std::abs(mc - exact.rho[static_cast<std::size_t>(p)]);
    if (diff > 3.0 * sigma + resolution) chk.ok = false;
    if (sigma > 0.0) worst_pull = std::max(worst_pull, diff / sigma);
  }
  r.passed = chk.ok && est.usable;
  r.detail = fmt("%d sites checked, worst |pull|=%.2f sigma, acceptance=%.2f",
                 sites, worst_pull, chain.acceptance_rate());
  return r;
}

// ---- criterion 11: calibration freeze ----------------------------------------

CriterionResult criterion_calibration() {
  CriterionResult r;
  r.id = 11;
  r.name = "frozen sign/index calibration constants";
  const DensityCalibration d = calibrate_density_convention();
  const KernelCalibration k = calibrate_kernel_convention();
  r.passed = (d == kDensityCalibration) && (k == kKernelCalibration);
  r.detail = fmt("density {s=%d,dl=%d,dh=%d,c=%d} kernel {s=%d,dl=%d,dh=%d}",
                 d.sign, d.shift_ell, d.shift_hat, d.additive, k.sign, k.shift_ell,
                 k.shift_hat);
  return r;
}

}  // namespace

bool ValidationReport::all_passed() const {
  for (const auto& c : criteria)
    if (!c.passed) return false;
  return true;
}

ValidationReport run_acceptance(ValidationLevel level, int threads, int which) {
  using Clock = std::chrono::steady_clock;
  ValidationReport report;
  const std::vector<std::pair<int, std::function<CriterionResult()>>> table = {
      {1, [&] { return criterion_oracle_equivalence(threads); }},
      {2, [] { return criterion_characters(); }},
      {3, [] { return criterion_normalization(); }},
      {4, [] { return criterion_limit_shape(); }},
      {5, [] { return criterion_plateau(); }},
      {6, [] { return criterion_two_forms(); }},
      {7, [] { return criterion_edge(); }},
      {8, [] { return criterion_sine(); }},
      {9, [] { return criterion_small_weights(); }},
      {10, [] { return criterion_mcmc(); }},
      {11, [] { return criterion_calibration(); }},
  };
  const bool quick = level == ValidationLevel::quick;
  for (const auto& [id, fn] : table) {
    if (which != 0 && id != which) continue;
    if (which == 0 && quick && (id == 7 || id == 8 || id == 10)) continue;
    const auto t0 = Clock::now();
    CriterionResult res = fn();
    res.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    report.criteria.push_back(std::move(res));
  }
  return report;
}

}  // namespace dens
