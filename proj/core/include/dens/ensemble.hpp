// Ensemble parameters {alpha_k} and integer level configurations.
#pragma once

#include <cstdint>
#include <vector>

namespace dens {

using Levels = std::vector<std::int64_t>;
using Weights = std::vector<std::int64_t>;

// The N source parameters alpha_1..alpha_N, each in (0,1). Construct either
// from an explicit list or from the equal-value shorthand (alpha, N).
class AlphaSpec {
 public:
  static AlphaSpec equal(double alpha, int n);
  static AlphaSpec from_values(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  int n() const { return static_cast<int>(values_.size()); }
  bool equal_flag() const { return equal_flag_; }
  // Representative value when equal_flag() holds (the common alpha).
  double equal_value() const { return values_.front(); }
  double max_alpha() const;
  bool pairwise_distinct(double tol = kDegenerateTol) const;

  // Spread below which determinant routes refuse and callers must take the
  // equal-alpha or series path: Delta(alpha) cancellation kills precision
  // well before the confluent formula breaks.
  static constexpr double kDegenerateTol = 1e-8;

 private:
  AlphaSpec(std::vector<double> values, bool equal_flag);
  std::vector<double> values_;
  bool equal_flag_;
};

// Strictly decreasing non-negative levels h_1 > h_2 > ... > h_N >= 0.
// Highest weights relate by m_k = h_k + k - N; the conversion lives here so
// no other module re-derives the off-by-one.
class LevelConfig {
 public:
  explicit LevelConfig(Levels levels);
  static LevelConfig from_weights(const Weights& weights);

  const Levels& levels() const { return levels_; }
  int n() const { return static_cast<int>(levels_.size()); }
  Weights weights() const;
  std::int64_t level_sum() const;
  // |lambda| = sum of highest weights = sum h_k - N(N-1)/2.
  std::int64_t weight_sum() const;

 private:
  Levels levels_;
};

// Conversions useable without constructing a LevelConfig (weights must be
// non-increasing and non-negative, levels strictly decreasing).
Levels levels_from_weights(const Weights& weights);
Weights weights_from_levels(const Levels& levels);

}  // namespace dens
