#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "dens/asympt.hpp"
#include "dens/exact_kernel.hpp"

using namespace dens;

namespace {

// Integral of the arctan bulk density over (b,a) with the sqrt endpoints
// flattened by sigma = b + (a-b) sin^2(theta); plain Simpson then converges
// fast. Used as an independent quadrature oracle.
double bulk_mass(const LimitShape& shape) {
  const double a = shape.a(), b = shape.b();
  const int m = 20000;
  double acc = 0.0;
  const double h = (3.14159265358979323846 / 2) / m;
  for (int i = 0; i <= m; ++i) {
    const double theta = i * h;
    const double sigma = b + (a - b) * std::sin(theta) * std::sin(theta);
    const double jac = (a - b) * std::sin(2.0 * theta);
    const double f = shape.density(std::min(std::max(sigma, b + 1e-15), a - 1e-15)) * jac;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * f;
  }
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("limit shape endpoints: alpha=1/4 gives a=3, b=1/3; a*b=1 always") {
  const LimitShape shape(0.25);
  CHECK(shape.a() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(shape.b() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  for (double alpha : {0.05, 0.3, 0.62, 0.9}) {
    const LimitShape s(alpha);
    CHECK(s.a() * s.b() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("limit shape: exact plateau, endpoint limits, unit mass") {
  const LimitShape shape(0.25);
  CHECK(shape.density(0.1) == 1.0);
  CHECK(shape.density(shape.b() * 0.999) == 1.0);
  CHECK(shape.density(shape.b() + 1e-12) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(shape.density(shape.a() - 1e-12) == doctest::Approx(0.0).epsilon(1e-5));
  CHECK(shape.density(shape.a() + 0.5) == 0.0);

  const double mass = shape.b() + bulk_mass(shape);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("the two independent limit-density derivations coincide pointwise") {
  for (double alpha : {0.1, 0.25, 0.6}) {
    const LimitShape shape(alpha);
    const int grid = 500;
    const double lo = shape.b() + 1e-3, hi = shape.a() - 1e-3;
    for (int i = 0; i <= grid; ++i) {
      const double s = lo + (hi - lo) * i / grid;
      CHECK(std::abs(shape.density(s) - shape.density_log_form(s)) < 1e-10);
    }
  }
}

TEST_CASE("resolvent solver: equal-alpha closed form recovered to 1e-10") {
  const double alpha = 0.25;
  const LimitShape shape(alpha);
  const ResolventSolver solver(AlphaSpec::equal(alpha, 1));
  CHECK(solver.edges().upper == doctest::Approx(shape.a()).epsilon(1e-10));
  CHECK(solver.edges().lower == doctest::Approx(shape.b()).epsilon(1e-10));

  std::vector<double> grid;
  for (int i = 0; i <= 50; ++i)
    grid.push_back(shape.b() + 1e-3 + (shape.a() - shape.b() - 2e-3) * i / 50.0);
  const auto sols = solver.solve_grid(grid);
  for (const auto& sol : sols) {
    CHECK(sol.residual < 1e-10);
    // Same +i0 regularization on both sides of the comparison.
    const std::complex<double> z(sol.sigma, 1e-9);
    const std::complex<double> eg = shape.resolvent_exp(z);
    const double rho_closed = -std::arg(eg) / 3.14159265358979323846;
    CHECK(std::abs(sol.rho - rho_closed) < 1e-10);
    // e^G from NEWV root and from the closed form are reciprocal-consistent.
    CHECK(std::abs(sol.u * eg - 1.0) < 1e-9);
    // Against the real-axis arctan form only the i*eps smoothing separates us.
    CHECK(std::abs(sol.rho - shape.density(sol.sigma)) < 1e-5);
  }
}

TEST_CASE("resolvent solver: asymptotic branch u->1, G->0") {
  const ResolventSolver solver(AlphaSpec::from_values({0.2, 0.6}));
  const auto sol = solver.solve(1e6);
  CHECK(std::abs(sol.u - 1.0) < 1e-5);
  CHECK(std::abs(sol.g) < 1e-5);
  CHECK(sol.rho < 1e-12);
}

TEST_CASE("two-atom source: solver density integrates to one") {
  const ResolventSolver solver(AlphaSpec::from_values({0.2, 0.6}));
  const double top = solver.edges().upper + 0.2;
  const int m = 4000;
  std::vector<double> grid;
  const double lo = 1e-3;
  for (int i = 0; i <= m; ++i) grid.push_back(lo + (top - lo) * i / m);
  const auto sols = solver.solve_grid(grid);
  double mass = lo * sols.front().rho;  // saturated stub below the first point
  for (int i = 1; i <= m; ++i) {
    mass += 0.5 * (sols[i].rho + sols[i - 1].rho) * (grid[i] - grid[i - 1]);
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(5e-3));
  for (const auto& s : sols) CHECK(s.residual < 1e-10);
}

TEST_CASE("finite-N density against the limit shape (bulk and plateau)") {
  const auto c64 = finite_n_vs_limit(0.25, 64);
  CHECK(c64.sup_norm < 0.02);
  CHECK(c64.plateau_min >= 0.99);
  const auto c128 = finite_n_vs_limit(0.25, 128);
  CHECK(c64.sup_norm / c128.sup_norm >= 1.5);
}

TEST_CASE("edge scaling: exponent 1/2 and N^{2/3} collapse") {
  const auto rep = edge_scaling_check(0.25, {64, 128});
  CHECK(std::abs(rep.exponent - 0.5) <= 0.02);
  REQUIRE(rep.collapses.size() == 1);
  CHECK(rep.collapses.front().distance <= 0.10);
}

TEST_CASE("edge scaling integral: closed value at x=0 and monotone decay") {
  // theta = t^{1/3} reduces x=0 to Gamma(1/6)/3.
  const double expect = std::tgamma(1.0 / 6.0) / 3.0;
  CHECK(scaling_integral(0.0) == doctest::Approx(expect).epsilon(1e-9));
  double prev = scaling_integral(0.0);
  for (double x = 0.5; x <= 10.0; x += 0.5) {
    const double v = scaling_integral(x);
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
}

TEST_CASE("sine kernel: predicted zeros at even separations when rho_bar=1/2") {
  const auto rep = sine_kernel_check(0.25, 128);
  CHECK(std::abs(rep.rho_bar - 0.5) < 0.02);
  for (const auto& row : rep.rows) {
    if (row.separation % 2 == 0) {
      CHECK(row.predicted < 1e-2);  // sin(pi * integer) = 0 up to rho_bar offset
    } else if (row.relative) {
      CHECK(row.deviation < 0.05);
    }
  }
  CHECK(rep.saturated_max_abs < 1e-3);
}

TEST_CASE("small weights: P_inf anchors, monotone decrease, bounds") {
  for (double rho : {0.05, 0.5, 2.0}) {
    CHECK(small_weight_density(0, rho) ==
          doctest::Approx(1.0 - std::exp(-rho)).epsilon(1e-13));
    double prev = small_weight_density(0, rho);
    for (int p = 1; p <= 20; ++p) {
      const double v = small_weight_density(p, rho);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      if (rho <= 0.1) CHECK(v < prev);  // oracle-confirmed direction
      prev = v;
    }
  }
}

TEST_CASE("small weights: small-rho expansions of P_inf and R_inf") {
  const double rho = 1e-3;
  const double rho3 = rho * rho * rho;
  for (int p = 0; p <= 10; ++p) {
    // The bridge-correct expansion carries (p + 1/2), not (p + 1);
    // the rho^3 coefficient is 1/6 + p + p(p-1)/2.
    const double expect = rho - (p + 0.5) * rho * rho;
    CHECK(std::abs(small_weight_density(p, rho) - expect) <
          2.0 * (1.0 + p + 0.5 * p * p) * rho3);
  }
  for (int p = 0; p <= 6; ++p) {
    for (int q = 0; q <= 6; ++q) {
      if (p == q) continue;  // the diagonal carries the M_0^2 = 1 term
      // Expanding M_{|p-q|} to second order:
      //   R_inf = -rho + [min(p,q) + (|p-q|-1)/2] rho^2 + O(rho^3),
      // which matches the quoted -rho + min(p,q) rho^2 exactly when |p-q|=1.
      const double expect =
          -rho + (std::min(p, q) + 0.5 * (std::abs(p - q) - 1)) * rho * rho;
      CHECK(std::abs(small_weight_correlator(p, q, rho) - expect) <
            5.0 * (1.0 + p + q) * (1.0 + p + q) * rho3);
    }
  }
  // At unit separation the second-order coefficient is exactly min(p,q).
  for (int p = 0; p <= 8; ++p) {
    const double expect = -rho + p * rho * rho;
    CHECK(std::abs(small_weight_correlator(p + 1, p, rho) - expect) <
          5.0 * (1.0 + p) * (1.0 + p) * rho3);
  }
}

TEST_CASE("small weights: finite-N bridge for density and correlator") {
  const double rho = 0.5;
  const int n = 200;
  const AlphaSpec alphas = AlphaSpec::equal(1.0 - rho / n, n);
  for (int p = 0; p <= 10; ++p) {
    CHECK(std::abs(n * density_exact(p, alphas) - small_weight_density(p, rho)) <
          5e-3);
  }
  // -e^{-2rho} R_inf(p,q) R_inf(q,p) is the limiting connected correlator.
  for (int p = 0; p <= 5; ++p) {
    for (int q = 0; q <= 5; ++q) {
      if (p == q) continue;
      const double limit = -std::exp(-2.0 * rho) *
                           small_weight_correlator(p, q, rho) *
                           small_weight_correlator(q, p, rho);
      CHECK(std::abs(pair_correlator(p, q, alphas) - limit) < 5e-3);
    }
  }
}

TEST_CASE("resolvent: invalid sigma rejected") {
  const ResolventSolver solver(AlphaSpec::equal(0.25, 1));
  CHECK_THROWS_AS(solver.solve(0.0), std::invalid_argument);
  CHECK_THROWS_AS(solver.solve(-2.0), std::invalid_argument);
}
