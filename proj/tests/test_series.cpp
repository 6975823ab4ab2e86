#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "dens/ell.hpp"
#include "dens/series.hpp"

using namespace dens;

TEST_CASE("double-double keeps bits a double loses") {
  DoubleDouble x(1e16);
  x += DoubleDouble(1.0);
  x -= DoubleDouble(1e16);
  CHECK(to_double(x) == 1.0);

  const DoubleDouble p = DoubleDouble(1.0) / DoubleDouble(3.0);
  CHECK(std::abs(to_double(p * DoubleDouble(3.0)) - 1.0) < 1e-30);
}

TEST_CASE("N=1 series: geometric expansions") {
  const AlphaSpec a = AlphaSpec::from_values({0.5});
  const auto basic = series_from_product(a, EllKind::basic, 8);
  CHECK(basic.coeff(0) == doctest::Approx(0.5).epsilon(1e-15));
  for (int q = 1; q <= 8; ++q)
    CHECK(basic.coeff(q) == doctest::Approx(-0.5).epsilon(1e-15));

  const auto hat = series_from_product(a, EllKind::hat, 8);
  CHECK(hat.coeff(0) == doctest::Approx(1.0).epsilon(1e-15));
  for (int q = 1; q <= 8; ++q)
    CHECK(hat.coeff(q) ==
          doctest::Approx(std::pow(0.5, q) - std::pow(0.5, q - 1)).epsilon(1e-14));
}

TEST_CASE("series constants: c0 of the basic kind is prod(alpha), hat starts at 1") {
  const AlphaSpec a = AlphaSpec::from_values({0.2, 0.7, 0.4});
  CHECK(series_from_product(a, EllKind::basic, 4).coeff(0) ==
        doctest::Approx(0.2 * 0.7 * 0.4).epsilon(1e-15));
  CHECK(series_from_product(a, EllKind::hat, 4).coeff(0) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ell_hat(0, a) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("truncation exactness: cap q and cap 2q agree bit for bit") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> adist(0.05, 0.95);
  for (int it = 0; it < 20; ++it) {
    const int n = 1 + static_cast<int>(rng() % 5);
    std::vector<double> av(n);
    for (auto& v : av) v = adist(rng);
    const AlphaSpec a = AlphaSpec::from_values(av);
    const int q = 12;
    for (EllKind kind : {EllKind::basic, EllKind::hat}) {
      const auto s1 = series_from_product(a, kind, q);
      const auto s2 = series_from_product(a, kind, 2 * q);
      for (int i = 0; i <= q; ++i) CHECK(s1.coeff(i) == s2.coeff(i));
    }
  }
}

TEST_CASE("ell is a symmetric function of the alphas") {
  std::vector<double> av = {0.1, 0.45, 0.8, 0.3};
  const auto base = series_from_product(AlphaSpec::from_values(av), EllKind::basic, 10);
  std::sort(av.begin(), av.end());
  do {
    const auto perm = series_from_product(AlphaSpec::from_values(av), EllKind::basic, 10);
    for (int q = 0; q <= 10; ++q)
      CHECK(perm.coeff(q) == doctest::Approx(base.coeff(q)).epsilon(1e-13));
  } while (std::next_permutation(av.begin(), av.end()));
}

TEST_CASE("equal-alpha relation L^q = alpha^{N-q} Lhat^q via the series route") {
  // N=3, alpha=0.4; computed through the generic product
  // series, independent of the recurrence dispatch in EllTable.
  const AlphaSpec a3 = AlphaSpec::equal(0.4, 3);
  const auto basic = series_from_product(a3, EllKind::basic, 10);
  const auto hat = series_from_product(a3, EllKind::hat, 10);
  for (int q = 0; q <= 10; ++q) {
    const double lhs = basic.coeff(q);
    const double rhs = std::pow(0.4, 3 - q) * hat.coeff(q);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("equal-alpha relation holds to 1e-12 relative up to N=50 (double-double)") {
  for (int n : {20, 35, 50}) {
    const AlphaSpec a = AlphaSpec::equal(0.4, n);
    const auto basic = series_from_product_dd(a, EllKind::basic, n);
    const auto hat = series_from_product_dd(a, EllKind::hat, n);
    for (int q = 0; q <= n; ++q) {
      const double lhs = basic.coeff(q);
      const double rhs = std::pow(0.4, n - q) * hat.coeff(q);
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
      CHECK(std::abs(lhs - rhs) / scale < 1e-12);
    }
  }
}

TEST_CASE("EllTable equal-alpha recurrence matches the generic series") {
  const AlphaSpec a = AlphaSpec::equal(0.3, 12);
  const auto table = EllTable::build(a, 40);
  const auto hat = series_from_product_dd(a, EllKind::hat, 40);
  const auto basic = series_from_product_dd(a, EllKind::basic, 40);
  for (int q = 0; q <= 40; ++q) {
    const double scale = std::max(std::abs(hat.coeff(q)), 1.0);
    CHECK(std::abs(table.ell_hat(q) - hat.coeff(q)) / scale < 1e-12);
    const double bscale = std::max(std::abs(basic.coeff(q)), 1e-300);
    CHECK(std::abs(table.ell(q) - basic.coeff(q)) / bscale < 1e-10);
  }
}

TEST_CASE("equal-alpha table survives deep tails at extreme alpha") {
  // alpha^{(N-q)/2} alone overflows here; products must still come out
  // finite, non-negative, and summable to 1.
  const AlphaSpec a = AlphaSpec::equal(0.02, 4);
  const auto table = EllTable::build(a, 700);
  double cumsum = 0.0;
  for (int q = 0; q <= 700; ++q) {
    const double prod = table.ell_product(q);
    CHECK(std::isfinite(prod));
    CHECK(prod >= 0.0);
    cumsum += prod;
  }
  CHECK(cumsum == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("alpha -> 1 degenerates to delta_{q,0}") {
  const AlphaSpec a = AlphaSpec::equal(1.0 - 1e-12, 4);
  const auto s = series_from_product(a, EllKind::basic, 6);
  CHECK(s.coeff(0) == doctest::Approx(1.0).epsilon(1e-10));
  for (int q = 1; q <= 6; ++q) CHECK(std::abs(s.coeff(q)) < 1e-9);
}

TEST_CASE("Laguerre differences: closed low orders and the small-rho law") {
  for (double rho : {0.1, 0.7, 3.0}) {
    CHECK(laguerre_m(0, rho) == 1.0);
    CHECK(laguerre_m(1, rho) == doctest::Approx(-rho).epsilon(1e-14));
    CHECK(laguerre_m(2, rho) ==
          doctest::Approx(-rho + rho * rho / 2.0).epsilon(1e-13));
  }
  // M_p(rho) ~ -rho for every p >= 1 when rho is tiny.
  for (int p = 1; p <= 10; ++p)
    CHECK(std::abs(laguerre_m(p, 1e-4) + 1e-4) < 1e-7);
}

TEST_CASE("Laguerre recurrence residual stays at rounding level") {
  for (double rho : {0.5, 5.0, 20.0}) {
    for (int n = 1; n <= 200; ++n) {
      const double lm1 = laguerre_l(n - 1, rho);
      const double l = laguerre_l(n, rho);
      const double lp1 = laguerre_l(n + 1, rho);
      const double resid = (n + 1.0) * lp1 - (2.0 * n + 1.0 - rho) * l + n * lm1;
      const double scale = std::abs((n + 1.0) * lp1) +
                           std::abs((2.0 * n + 1.0 - rho) * l) +
                           std::abs(n * lm1) + 1.0;
      CHECK(std::abs(resid) < 1e-12 * scale);
    }
  }
}

TEST_CASE("small-weight limit of the coefficients: Richardson halving") {
  const double rho = 0.5;
  const auto [v200, target] = ell_laguerre_limit_check(3, rho, 200);
  const auto [v400, target2] = ell_laguerre_limit_check(3, rho, 400);
  CHECK(target == target2);
  const double e200 = std::abs(v200 - target);
  const double e400 = std::abs(v400 - target);
  const double ratio = e200 / e400;
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.4);

  // Hatted family converges to M_p with no e^{-rho} factor.
  const auto [h400, m3] = ell_hat_laguerre_limit_check(3, rho, 400);
  CHECK(m3 == doctest::Approx(laguerre_m(3, rho)).epsilon(1e-15));
  CHECK(std::abs(h400 - m3) < 5e-3);

  // rho -> 0: both sides -> 0 for p >= 1, -> e^{-rho} ~ 1 for p = 0.
  const auto [v0, t0] = ell_laguerre_limit_check(0, 1e-8, 100);
  CHECK(v0 == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(t0 == doctest::Approx(1.0).epsilon(1e-6));
  const auto [v1, t1] = ell_laguerre_limit_check(1, 1e-8, 100);
  CHECK(std::abs(v1) < 1e-6);
  CHECK(std::abs(t1) < 1e-6);
}

TEST_CASE("series building blocks: linear multiply, divide, reciprocal") {
  // (1 - 0.5 x) * 1/(1 - 0.5 x) == 1                     (divide route)
  auto s = TruncatedSeries<double>::constant(1.0, 10);
  s.mul_linear(1.0, -0.5);
  s.div_one_minus(0.5);
  CHECK(s.coeff(0) == doctest::Approx(1.0));
  for (int q = 1; q <= 10; ++q) CHECK(std::abs(s.coeff(q)) < 1e-15);

  // reciprocal: (2 + x) * reciprocal(2 + x) == 1.
  auto t = TruncatedSeries<double>::constant(2.0, 8);
  t.mul_linear(1.0, 0.5);  // 2 + x
  const auto r = t.reciprocal();
  const auto prod = t * r;
  CHECK(prod.coeff(0) == doctest::Approx(1.0).epsilon(1e-14));
  for (int q = 1; q <= 8; ++q) CHECK(std::abs(prod.coeff(q)) < 1e-14);

  CHECK_THROWS_AS(TruncatedSeries<double>(3).reciprocal(), std::domain_error);
}
