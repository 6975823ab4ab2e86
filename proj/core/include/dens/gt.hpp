// Gelfand-Tseytlin patterns: interlacing triangular arrays indexing the basis
// states of a GL(N) irreducible representation.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dens/ensemble.hpp"

namespace dens {

// Triangular array m_{j,i}, j = 1..N, i = 1..j. row(j) has j entries and
// row(N) equals the highest weights. Interlacing: m_{j,i} >= m_{j-1,i} >= m_{j,i+1}.
class GTPattern {
 public:
  explicit GTPattern(std::vector<Weights> rows);

  int n() const { return static_cast<int>(rows_.size()); }
  // 1-based row index, matching the j in m_{j,i}.
  const Weights& row(int j) const { return rows_.at(static_cast<std::size_t>(j - 1)); }
  const std::vector<Weights>& rows() const { return rows_; }

 private:
  std::vector<Weights> rows_;  // rows_[j-1] has j entries
};

// l_j = sum(row j) - sum(row j-1); the exponent vector of the character
// monomial prod_j alpha_j^{l_j}. The l_j sum to the top-row total.
std::vector<std::int64_t> gt_weight_vector(const GTPattern& pattern);

// Depth-first streaming enumeration of all GT patterns over the given
// non-increasing, non-negative weights. Single consumer; O(N^2) state.
class GtPatternStream {
 public:
  explicit GtPatternStream(Weights weights);
  GtPatternStream(const GtPatternStream&) = delete;
  GtPatternStream& operator=(const GtPatternStream&) = delete;

  std::optional<GTPattern> next();

 private:
  bool advance();

  std::vector<Weights> rows_;
  bool fresh_ = true;
  bool exhausted_ = false;
};

// Visit every pattern exactly once, passing the filled triangular array
// (rows[j-1] has j entries). Faster than the stream when no copies are needed.
void visit_gt_patterns(const Weights& weights,
                       const std::function<void(const std::vector<Weights>&)>& visit);

// Number of GT patterns = dimension of the representation.
std::int64_t gt_pattern_count(const Weights& weights);

}  // namespace dens
