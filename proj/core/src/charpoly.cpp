#include "dens/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dens/gt.hpp"

namespace dens {

namespace {

// Plain LU determinant with partial pivoting; N here is tiny.
double lu_det(std::vector<double>& m, int n) {
  double det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(m[col * n + c], m[piv * n + c]);
      det = -det;
    }
    const double d = m[col * n + col];
    if (d == 0.0) return 0.0;
    det *= d;
    for (int r = col + 1; r < n; ++r) {
      const double f = m[r * n + col] / d;
      for (int c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
    }
  }
  return det;
}

// det_{k,j} (alpha_k / alpha_max)^{e_j}. Scaling each column by the largest
// alpha keeps entries <= 1, so powers of h up to ~10^3 neither overflow nor
// drown the pivoting.
double scaled_power_det(const std::vector<double>& alphas, const Levels& exps) {
  const int n = static_cast<int>(alphas.size());
  const double amax = *std::max_element(alphas.begin(), alphas.end());
  std::vector<double> m(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    const double r = alphas[k] / amax;
    for (int j = 0; j < n; ++j)
      m[k * n + j] = std::pow(r, static_cast<double>(exps[j]));
  }
  return lu_det(m, n);
}

}  // namespace

double character_gt(const Weights& weights, const AlphaSpec& alphas) {
  if (static_cast<int>(weights.size()) != alphas.n())
    throw std::invalid_argument("character_gt: weights/alphas size mismatch");
  const auto& a = alphas.values();
  const int n = alphas.n();
  double chi = 0.0;
  visit_gt_patterns(weights, [&](const std::vector<Weights>& rows) {
    double term = 1.0;
    std::int64_t prev = 0;
    for (int j = 1; j <= n; ++j) {
      std::int64_t s = 0;
      for (auto v : rows[j - 1]) s += v;
      term *= std::pow(a[j - 1], static_cast<double>(s - prev));
      prev = s;
    }
    chi += term;
  });
  return chi;
}

double character_det(const LevelConfig& config, const AlphaSpec& alphas) {
  if (config.n() != alphas.n())
    throw std::invalid_argument("character_det: config/alphas size mismatch");
  if (!alphas.pairwise_distinct())
    throw std::domain_error(
        "character_det: nearly coincident alphas; use character_equal or the "
        "series route");
  const int n = alphas.n();
  const Levels& h = config.levels();
  Levels vac(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) vac[j] = n - 1 - j;

  const double num = scaled_power_det(alphas.values(), h);
  const double den = scaled_power_det(alphas.values(), vac);
  // Column scalings alpha_max^{h_j} / alpha_max^{N-j} combine to
  // alpha_max^{sum m_k}.
  const double amax = alphas.max_alpha();
  return num / den * std::pow(amax, static_cast<double>(config.weight_sum()));
}

double character_equal(const LevelConfig& config, double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("character_equal: alpha must be positive");
  return dimension(config.weights()) *
         std::pow(alpha, static_cast<double>(config.weight_sum()));
}

double vandermonde_abs(const Levels& levels) {
  double prod = 1.0;
  for (std::size_t j = 0; j < levels.size(); ++j)
    for (std::size_t m = j + 1; m < levels.size(); ++m)
      prod *= static_cast<double>(levels[j] - levels[m]);
  return prod;
}

double dimension(const Weights& weights) {
  const LevelConfig cfg = LevelConfig::from_weights(weights);
  const Levels& h = cfg.levels();
  const int n = cfg.n();
  double dim = vandermonde_abs(h);
  for (int k = 2; k < n; ++k)  // divide by 0! 1! ... (N-1)!
    for (int f = 2; f <= k; ++f) dim /= static_cast<double>(f);
  return dim;
}

double measure_weight(const Levels& levels, const AlphaSpec& alphas) {
  Levels sorted = levels;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) return 0.0;  // Vandermonde vanishes
  for (auto h : sorted)
    if (h < 0) throw std::invalid_argument("measure_weight: negative level");
  return measure_weight(LevelConfig(std::move(sorted)), alphas);
}

double measure_weight(const LevelConfig& config, const AlphaSpec& alphas) {
  const double vdm = vandermonde_abs(config.levels());
  if (alphas.equal_flag() || !alphas.pairwise_distinct()) {
    // Near-degenerate spreads are collapsed onto the mean; the confluent
    // formula is the stable evaluation there.
    double mean = 0.0;
    for (double a : alphas.values()) mean += a;
    mean /= alphas.n();
    return vdm * character_equal(config, mean);
  }
  return vdm * character_det(config, alphas);
}

}  // namespace dens
