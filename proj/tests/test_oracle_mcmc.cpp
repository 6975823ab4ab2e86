#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dens/asympt.hpp"
#include "dens/common.hpp"
#include "dens/exact_kernel.hpp"
#include "dens/mcmc.hpp"
#include "dens/oracle.hpp"

using namespace dens;

TEST_CASE("enumeration: N=1 geometric ensemble to machine precision") {
  EnumerationOptions opts;
  opts.h_max = 120;
  const auto res = enumerate_measure(AlphaSpec::from_values({0.5}), opts);
  for (int p = 0; p <= 40; ++p)
    CHECK(std::abs(res.density[p] - 0.5 * std::pow(0.5, p)) < 1e-15);
  CHECK(res.tail_estimate < 1e-12);
}

TEST_CASE("enumeration: occupations integrate to N and probabilities to 1") {
  EnumerationOptions opts;
  opts.h_max = 80;
  const auto res = enumerate_measure(AlphaSpec::from_values({0.2, 0.4, 0.6}), opts);
  double total = 0.0;
  for (double rho : res.density) total += rho;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("enumeration backends: determinant and GT characters concur") {
  for (auto alphas : {AlphaSpec::from_values({0.5, 0.25}),
                      AlphaSpec::from_values({0.3, 0.55, 0.7})}) {
    EnumerationOptions det_opts, gt_opts;
    det_opts.h_max = gt_opts.h_max = 12;
    det_opts.backend = CharacterBackend::determinant;
    gt_opts.backend = CharacterBackend::gelfand_tseytlin;
    const auto det = enumerate_measure(alphas, det_opts);
    const auto gt = enumerate_measure(alphas, gt_opts);
    CHECK(det.z == doctest::Approx(gt.z).epsilon(1e-12));
    for (std::size_t p = 0; p < det.density.size(); ++p)
      CHECK(det.density[p] == doctest::Approx(gt.density[p]).epsilon(1e-11));
  }
}

TEST_CASE("enumeration: equal backend against the perturbed determinant") {
  const auto eq = [&] {
    EnumerationOptions o;
    o.h_max = 60;
    return enumerate_measure(AlphaSpec::equal(0.3, 2), o);
  }();
  const auto det = [&] {
    EnumerationOptions o;
    o.h_max = 60;
    return enumerate_measure(AlphaSpec::from_values({0.3, 0.3 * (1 + 1e-7)}), o);
  }();
  for (int p = 0; p <= 20; ++p)
    CHECK(std::abs(eq.density[p] - det.density[p]) < 1e-6);
}

TEST_CASE("enumeration tail estimate shrinks with h_max at roughly alpha_max") {
  const AlphaSpec a = AlphaSpec::from_values({0.5, 0.25});
  EnumerationOptions o1, o2;
  o1.h_max = 40;
  o2.h_max = 41;
  const double t1 = enumerate_measure(a, o1).tail_estimate;
  const double t2 = enumerate_measure(a, o2).tail_estimate;
  CHECK(t2 < t1);
  CHECK(t2 / t1 < 0.5 * 1.6);  // alpha_max with generous slack
}

TEST_CASE("enumeration cost guard") {
  EnumerationOptions opts;
  opts.h_max = 300;
  try {
    enumerate_measure(AlphaSpec::equal(0.3, 6), opts);
    FAIL("expected cost_error");
  } catch (const cost_error& e) {
    CHECK(e.estimated_configs() > opts.budget);
  }
}

TEST_CASE("enumeration is deterministic across thread counts") {
  const AlphaSpec a = AlphaSpec::from_values({0.5, 0.25});
  EnumerationOptions o1, o4;
  o1.h_max = o4.h_max = 50;
  o1.threads = 1;
  o4.threads = 4;
  const auto r1 = enumerate_measure(a, o1);
  const auto r4 = enumerate_measure(a, o4);
  CHECK(r1.z == r4.z);
  CHECK(r1.density == r4.density);
}

TEST_CASE("MCMC: N=1 histogram reproduces the geometric law within 3 sigma") {
  const AlphaSpec a = AlphaSpec::from_values({0.5});
  McmcOptions opts;
  opts.steps = 1'000'000;
  opts.seed = 20240901;
  McmcChain chain(a, opts);
  chain.run();
  const auto est = estimate_density(chain);
  REQUIRE(est.usable);
  for (int p = 0; p <= 12; ++p) {
    const double exact = 0.5 * std::pow(0.5, p);
    CHECK(std::abs(est.profile.rho[p] - exact) <= 3.0 * est.sigma[p]);
  }
  // Histogram normalization is exact by construction.
  CHECK(est.profile.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("MCMC: N=2 density and pair table against enumeration within 3 sigma") {
  const AlphaSpec a = AlphaSpec::from_values({0.5, 0.25});
  EnumerationOptions eopts;
  eopts.h_max = 90;
  eopts.pair_window = 8;
  const auto oracle = enumerate_measure(a, eopts);

  McmcOptions opts;
  opts.steps = 1'500'000;
  opts.seed = 777;
  opts.pair_window = 8;
  McmcChain chain(a, opts);
  chain.run();
  const auto dens_est = estimate_density(chain);
  for (int p = 0; p <= 10; ++p)
    CHECK(std::abs(dens_est.profile.rho[p] - oracle.density[p]) <=
          3.0 * dens_est.sigma[p]);

  const auto pair_est = estimate_pair(chain);
  for (int p = 0; p <= 8; ++p)
    for (int q = 0; q <= 8; ++q)
      CHECK(std::abs(pair_est.at(p, q) - oracle.pair_connected(p, q)) <=
            3.0 * std::max(pair_est.sigma_at(p, q), 1e-12));
}

TEST_CASE("MCMC: incremental equal-alpha ratio equals the full recomputation") {
  const AlphaSpec a = AlphaSpec::equal(0.25, 32);
  McmcOptions opts;
  opts.steps = 20'000;
  opts.seed = 5;
  McmcChain chain(a, opts);
  chain.run();
  for (int k = 0; k < 32; ++k) {
    for (int delta : {-1, 1}) {
      const auto& h = chain.state();
      const std::int64_t trial = h[k] + delta;
      bool valid = trial >= 0;
      if (valid && k > 0 && trial >= h[k - 1]) valid = false;
      if (valid && k + 1 < 32 && trial <= h[k + 1]) valid = false;
      if (!valid) continue;
      const double inc = chain.weight_ratio(k, delta);
      const double full = chain.full_weight_ratio(k, delta);
      CHECK(std::abs(inc - full) <= 1e-12 * std::abs(full));
    }
  }
}

TEST_CASE("MCMC: N=32 bulk density within 3 sigma of the arctan limit shape") {
  // Triangle inequality splits the check: |mcmc - limit| is bounded by the
  // statistical band plus the known finite-size gap |exact - limit|.
  const AlphaSpec a = AlphaSpec::equal(0.25, 32);
  const LimitShape shape(0.25);
  McmcOptions opts;
  opts.steps = 1'000'000;
  opts.seed = 12345;
  McmcChain chain(a, opts);
  chain.run();
  const auto est = estimate_density(chain);
  const auto exact = density_profile(a);
  const int lo = static_cast<int>(std::ceil(32 * (shape.b() + 0.3)));
  const int hi = static_cast<int>(std::floor(32 * (shape.a() - 0.3)));
  for (int p = lo; p <= hi; ++p) {
    const double limit = shape.density(p / 32.0) / 32.0;
    const double systematic = std::abs(exact.rho[p] - limit);
    CHECK(std::abs(est.profile.rho[p] - limit) <=
          3.0 * est.sigma[p] + systematic + 1e-12);
  }
}

TEST_CASE("MCMC: bit-identical histograms for a fixed seed") {
  const AlphaSpec a = AlphaSpec::from_values({0.5, 0.25});
  McmcOptions opts;
  opts.steps = 200'000;
  opts.seed = 42;
  McmcChain c1(a, opts), c2(a, opts);
  c1.run();
  c2.run();
  CHECK(c1.counts() == c2.counts());
  CHECK(c1.pair_counts() == c2.pair_counts());
}

TEST_CASE("MCMC: jackknife bars shrink like 1/sqrt(steps)") {
  const AlphaSpec a = AlphaSpec::from_values({0.5});
  std::vector<double> sigmas;
  for (std::int64_t steps : {200'000, 400'000, 800'000, 1'600'000}) {
    McmcOptions opts;
    opts.steps = steps;
    opts.seed = 99;
    McmcChain chain(a, opts);
    chain.run();
    sigmas.push_back(estimate_density(chain).sigma[1]);
  }
  const double ratio = sigmas.front() / sigmas.back();  // expect ~ sqrt(8) = 2.83
  CHECK(ratio > 1.7);
  CHECK(ratio < 4.7);
}

TEST_CASE("MCMC: too-short chains flag their error bars as unusable") {
  const AlphaSpec a = AlphaSpec::from_values({0.5});
  McmcOptions opts;
  opts.steps = 500;
  opts.seed = 1;
  McmcChain chain(a, opts);
  chain.run();
  CHECK_FALSE(estimate_density(chain).usable);
}
