#include "dens/ensemble.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "dens/common.hpp"

namespace dens {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DISCRETE_ENSEMBLE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

void parallel_for(std::int64_t count, int threads,
                  const std::function<void(std::int64_t)>& fn) {
  if (count <= 0) return;
  threads = std::min<std::int64_t>(std::max(threads, 1), count);
  if (threads == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::int64_t i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace {

void check_alphas(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("AlphaSpec: need N >= 1");
  for (double a : values) {
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("AlphaSpec: every alpha must lie in (0,1), got " +
                                  std::to_string(a));
  }
}

bool all_close(const std::vector<double>& values, double tol) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo < tol;
}

}  // namespace

AlphaSpec::AlphaSpec(std::vector<double> values, bool equal_flag)
    : values_(std::move(values)), equal_flag_(equal_flag) {}

AlphaSpec AlphaSpec::equal(double alpha, int n) {
  if (n < 1) throw std::invalid_argument("AlphaSpec: need N >= 1");
  std::vector<double> v(static_cast<std::size_t>(n), alpha);
  check_alphas(v);
  return AlphaSpec(std::move(v), true);
}

AlphaSpec AlphaSpec::from_values(std::vector<double> values) {
  check_alphas(values);
  const bool eq = all_close(values, kDegenerateTol);
  return AlphaSpec(std::move(values), eq);
}

double AlphaSpec::max_alpha() const {
  return *std::max_element(values_.begin(), values_.end());
}

bool AlphaSpec::pairwise_distinct(double tol) const {
  std::vector<double> s = values_;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] - s[i - 1] < tol) return false;
  return true;
}

LevelConfig::LevelConfig(Levels levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("LevelConfig: empty");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i] < 0)
      throw std::invalid_argument("LevelConfig: levels must be non-negative");
    if (i > 0 && levels_[i] >= levels_[i - 1])
      throw std::invalid_argument("LevelConfig: levels must be strictly decreasing");
  }
}

LevelConfig LevelConfig::from_weights(const Weights& weights) {
  return LevelConfig(levels_from_weights(weights));
}

Weights LevelConfig::weights() const { return weights_from_levels(levels_); }

std::int64_t LevelConfig::level_sum() const {
  std::int64_t s = 0;
  for (auto h : levels_) s += h;
  return s;
}

std::int64_t LevelConfig::weight_sum() const {
  const std::int64_t n = static_cast<std::int64_t>(levels_.size());
  return level_sum() - n * (n - 1) / 2;
}

Levels levels_from_weights(const Weights& weights) {
  const std::int64_t n = static_cast<std::int64_t>(weights.size());
  Levels h(weights.size());
  for (std::int64_t k = 1; k <= n; ++k) {
    if (weights[k - 1] < 0)
      throw std::invalid_argument("weights must be non-negative");
    if (k > 1 && weights[k - 1] > weights[k - 2])
      throw std::invalid_argument("weights must be non-increasing");
    // m_k = h_k + k - N  =>  h_k = m_k + N - k
    h[k - 1] = weights[k - 1] + n - k;
  }
  return h;
}

Weights weights_from_levels(const Levels& levels) {
  const std::int64_t n = static_cast<std::int64_t>(levels.size());
  Weights m(levels.size());
  for (std::int64_t k = 1; k <= n; ++k) m[k - 1] = levels[k - 1] + k - n;
  return m;
}

}  // namespace dens
