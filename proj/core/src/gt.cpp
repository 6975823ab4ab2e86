#include "dens/gt.hpp"

#include <stdexcept>

namespace dens {

namespace {

void check_weights(const Weights& weights) {
  if (weights.empty()) throw std::invalid_argument("GT: empty weight vector");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0) throw std::invalid_argument("GT: negative weight");
    if (i > 0 && weights[i] > weights[i - 1])
      throw std::invalid_argument("GT: weights must be non-increasing");
  }
}

std::vector<Weights> make_rows(const Weights& weights) {
  check_weights(weights);
  const int n = static_cast<int>(weights.size());
  std::vector<Weights> rows(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) rows[j - 1].resize(static_cast<std::size_t>(j));
  rows[n - 1] = weights;
  return rows;
}

// Entries of row j0 (0-based) are individually boxed by the row above:
// rows[j0+1][i+1] <= rows[j0][i] <= rows[j0+1][i]; monotonicity within the
// row then comes for free.
void reset_row_to_min(std::vector<Weights>& rows, int j0) {
  for (std::size_t i = 0; i < rows[j0].size(); ++i)
    rows[j0][i] = rows[j0 + 1][i + 1];
}

}  // namespace

GTPattern::GTPattern(std::vector<Weights> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("GTPattern: empty");
  const int n = static_cast<int>(rows_.size());
  for (int j = 1; j <= n; ++j) {
    if (static_cast<int>(rows_[j - 1].size()) != j)
      throw std::invalid_argument("GTPattern: row j must have j entries");
  }
  check_weights(rows_[static_cast<std::size_t>(n) - 1]);
  for (int j = n; j >= 2; --j) {
    const auto& upper = rows_[j - 1];
    const auto& lower = rows_[j - 2];
    for (int i = 0; i + 1 < j; ++i) {
      if (!(upper[i] >= lower[i] && lower[i] >= upper[i + 1]))
        throw std::invalid_argument("GTPattern: interlacing violated");
    }
  }
}

std::vector<std::int64_t> gt_weight_vector(const GTPattern& pattern) {
  const int n = pattern.n();
  std::vector<std::int64_t> l(static_cast<std::size_t>(n));
  std::int64_t prev_sum = 0;
  for (int j = 1; j <= n; ++j) {
    std::int64_t s = 0;
    for (auto v : pattern.row(j)) s += v;
    l[j - 1] = s - prev_sum;
    prev_sum = s;
  }
  return l;
}

GtPatternStream::GtPatternStream(Weights weights) : rows_(make_rows(weights)) {
  const int n = static_cast<int>(rows_.size());
  for (int j0 = n - 2; j0 >= 0; --j0) reset_row_to_min(rows_, j0);
}

bool GtPatternStream::advance() {
  const int n = static_cast<int>(rows_.size());
  // Scan slots in reverse fill order: row 0 first (deepest), entries
  // right-to-left; bump the first slot below its box ceiling and reset
  // everything that was filled after it.
  for (int j0 = 0; j0 <= n - 2; ++j0) {
    for (int i = static_cast<int>(rows_[j0].size()) - 1; i >= 0; --i) {
      if (rows_[j0][i] < rows_[j0 + 1][i]) {
        ++rows_[j0][i];
        for (std::size_t k = static_cast<std::size_t>(i) + 1; k < rows_[j0].size(); ++k)
          rows_[j0][k] = rows_[j0 + 1][k + 1];
        for (int jj = j0 - 1; jj >= 0; --jj) reset_row_to_min(rows_, jj);
        return true;
      }
    }
  }
  return false;
}

std::optional<GTPattern> GtPatternStream::next() {
  if (exhausted_) return std::nullopt;
  if (fresh_) {
    fresh_ = false;
    return GTPattern(rows_);
  }
  if (!advance()) {
    exhausted_ = true;
    return std::nullopt;
  }
  return GTPattern(rows_);
}

void visit_gt_patterns(const Weights& weights,
                       const std::function<void(const std::vector<Weights>&)>& visit) {
  auto rows = make_rows(weights);
  const int n = static_cast<int>(rows.size());
  std::function<void(int, int)> fill = [&](int j0, int i) {
    if (j0 < 0) {
      visit(rows);
      return;
    }
    if (i > j0) {
      fill(j0 - 1, 0);
      return;
    }
    const std::int64_t lo = rows[j0 + 1][static_cast<std::size_t>(i) + 1];
    const std::int64_t hi = rows[j0 + 1][static_cast<std::size_t>(i)];
    for (std::int64_t v = lo; v <= hi; ++v) {
      rows[static_cast<std::size_t>(j0)][static_cast<std::size_t>(i)] = v;
      fill(j0, i + 1);
    }
  };
  fill(n - 2, 0);
}

std::int64_t gt_pattern_count(const Weights& weights) {
  std::int64_t count = 0;
  visit_gt_patterns(weights, [&](const std::vector<Weights>&) { ++count; });
  return count;
}

}  // namespace dens
