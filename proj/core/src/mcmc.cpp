#include "dens/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dens/charpoly.hpp"

namespace dens {

namespace {

inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void ensure_size(std::vector<std::int64_t>& v, std::size_t n) {
  if (v.size() < n) v.resize(n, 0);
}

}  // namespace

McmcChain::McmcChain(const AlphaSpec& alphas, const McmcOptions& opts)
    : alphas_(alphas), opts_(opts), rng_(opts.seed) {
  if (opts_.steps <= 0) throw std::invalid_argument("McmcChain: steps must be > 0");
  if (!(opts_.burn_in_fraction >= 0.0 && opts_.burn_in_fraction < 1.0))
    throw std::invalid_argument("McmcChain: burn-in fraction in [0,1)");
  const int n = alphas_.n();
  h_.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) h_[k] = n - 1 - k;  // densest packing
  block_counts_.assign(static_cast<std::size_t>(opts_.blocks), {});
  const std::size_t w1 = static_cast<std::size_t>(opts_.pair_window) + 1;
  pair_counts_.assign(w1 * w1, 0);
  block_pair_counts_.assign(static_cast<std::size_t>(opts_.blocks),
                            std::vector<std::int64_t>(w1 * w1, 0));
}

double McmcChain::weight_ratio(int k, int delta) const {
  const std::int64_t hk = h_[k];
  const std::int64_t hk_new = hk + delta;
  if (alphas_.equal_flag()) {
    // Delta^2(h) alpha^{sum h}: only pairs involving k change; O(N).
    double ratio = delta > 0 ? alphas_.equal_value() : 1.0 / alphas_.equal_value();
    for (int j = 0; j < alphas_.n(); ++j) {
      if (j == k) continue;
      const double f = static_cast<double>(hk_new - h_[j]) /
                       static_cast<double>(hk - h_[j]);
      ratio *= f * f;
    }
    return ratio;
  }
  Levels trial = h_;
  trial[k] = hk_new;
  return measure_weight(trial, alphas_) / measure_weight(h_, alphas_);
}

double McmcChain::full_weight_ratio(int k, int delta) const {
  if (alphas_.equal_flag()) {
    // O(N^2) log-space recomputation over every pair; stays finite even when
    // alpha^{sum h} itself underflows.
    Levels trial = h_;
    trial[k] += delta;
    double log_ratio = delta * std::log(alphas_.equal_value());
    const int n = alphas_.n();
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        log_ratio += 2.0 * (std::log(std::abs(static_cast<double>(trial[a] - trial[b]))) -
                            std::log(std::abs(static_cast<double>(h_[a] - h_[b]))));
      }
    }
    return std::exp(log_ratio);
  }
  Levels trial = h_;
  trial[k] += delta;
  return measure_weight(trial, alphas_) / measure_weight(h_, alphas_);
}

void McmcChain::run() {
  const int n = alphas_.n();
  const std::int64_t burn =
      static_cast<std::int64_t>(opts_.burn_in_fraction * opts_.steps);
  const std::int64_t span = opts_.steps - burn;
  const std::int64_t block_len = std::max<std::int64_t>(1, span / opts_.blocks);
  const int w = opts_.pair_window;

  for (std::int64_t step = 0; step < opts_.steps; ++step) {
    for (int sweep = 0; sweep < n; ++sweep) {
      const int k = static_cast<int>(rng_() % static_cast<std::uint64_t>(n));
      const int delta = (rng_() & 1u) ? 1 : -1;
      ++proposals_;

      const std::int64_t hk_new = h_[k] + delta;
      bool valid = hk_new >= 0;
      if (valid && k > 0 && hk_new >= h_[k - 1]) valid = false;
      if (valid && k + 1 < n && hk_new <= h_[k + 1]) valid = false;
      if (valid) {
        const double ratio = weight_ratio(k, delta);
        const double u = uniform01(rng_);
        if (u < ratio) {
          h_[k] = hk_new;
          ++accepted_;
        }
      }
    }

    if (step < burn) continue;
    const std::int64_t b =
        std::min<std::int64_t>((step - burn) / block_len, opts_.blocks - 1);
    auto& blk = block_counts_[static_cast<std::size_t>(b)];
    ++samples_;
    for (int i = 0; i < n; ++i) {
      const std::size_t p = static_cast<std::size_t>(h_[i]);
      ensure_size(counts_, p + 1);
      ensure_size(blk, p + 1);
      ++counts_[p];
      ++blk[p];
    }
    for (int i = 0; i < n; ++i) {
      if (h_[i] > w) continue;
      for (int j = i + 1; j < n; ++j) {
        if (h_[j] > w) continue;
        const std::size_t pq =
            static_cast<std::size_t>(h_[i]) * (w + 1) + static_cast<std::size_t>(h_[j]);
        const std::size_t qp =
            static_cast<std::size_t>(h_[j]) * (w + 1) + static_cast<std::size_t>(h_[i]);
        pair_counts_[pq] += 1;
        pair_counts_[qp] += 1;
        auto& pblk = block_pair_counts_[static_cast<std::size_t>(b)];
        pblk[pq] += 1;
        pblk[qp] += 1;
      }
    }
  }
}

double McmcChain::acceptance_rate() const {
  return proposals_ ? static_cast<double>(accepted_) / proposals_ : 0.0;
}

McmcChain mcmc_sample(const AlphaSpec& alphas, std::int64_t steps,
                      std::uint64_t seed) {
  McmcOptions opts;
  opts.steps = steps;
  opts.seed = seed;
  McmcChain chain(alphas, opts);
  chain.run();
  return chain;
}

DensityEstimate estimate_density(const McmcChain& chain) {
  const int n = chain.alphas().n();
  const auto& counts = chain.counts();
  const std::int64_t s = chain.samples();
  DensityEstimate est;
  est.usable = s >= 1000 && chain.options().blocks >= 8;

  est.profile.n = n;
  est.profile.rho.resize(counts.size());
  for (std::size_t p = 0; p < counts.size(); ++p)
    est.profile.rho[p] = static_cast<double>(counts[p]) / (static_cast<double>(s) * n);
  est.profile.tail_mass = 0.0;  // the histogram covers every visited site

  const auto& blocks = chain.block_counts();
  const int nb = static_cast<int>(blocks.size());
  std::vector<std::int64_t> block_samples(blocks.size(), 0);
  // Recover per-block sample counts from total occupancy (N entries/sample).
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::int64_t tot = 0;
    for (auto c : blocks[b]) tot += c;
    block_samples[b] = tot / n;
  }

  est.sigma.assign(counts.size(), 0.0);
  for (std::size_t p = 0; p < counts.size(); ++p) {
    double mean = 0.0;
    std::vector<double> loo(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const std::int64_t cb = p < blocks[b].size() ? blocks[b][p] : 0;
      const double rest_counts = static_cast<double>(counts[p] - cb);
      const double rest_samples = static_cast<double>(s - block_samples[b]);
      loo[b] = rest_counts / (rest_samples * n);
      mean += loo[b];
    }
    mean /= nb;
    double var = 0.0;
    for (double v : loo) var += (v - mean) * (v - mean);
    est.sigma[p] = std::sqrt(var * (nb - 1.0) / nb);
  }
  return est;
}

PairEstimate estimate_pair(const McmcChain& chain) {
  const int n = chain.alphas().n();
  const int w = chain.pair_window();
  const std::int64_t s = chain.samples();
  const std::size_t w1 = static_cast<std::size_t>(w) + 1;

  PairEstimate est;
  est.window = w;
  est.usable = s >= 1000 && chain.options().blocks >= 8;
  est.connected.assign(w1 * w1, 0.0);
  est.sigma.assign(w1 * w1, 0.0);

  const auto& counts = chain.counts();
  const auto& pairs = chain.pair_counts();
  const auto& blocks = chain.block_counts();
  const auto& pair_blocks = chain.block_pair_counts();
  const int nb = static_cast<int>(blocks.size());

  std::vector<std::int64_t> block_samples(blocks.size(), 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    std::int64_t tot = 0;
    for (auto c : blocks[b]) tot += c;
    block_samples[b] = tot / n;
  }

  auto occ_at = [&](int p) -> std::int64_t {
    return static_cast<std::size_t>(p) < counts.size() ? counts[p] : 0;
  };
  auto block_occ = [&](std::size_t b, int p) -> std::int64_t {
    return static_cast<std::size_t>(p) < blocks[b].size()
               ? blocks[b][static_cast<std::size_t>(p)]
               : 0;
  };

  std::vector<double> loo(blocks.size());
  for (int p = 0; p <= w; ++p) {
    for (int q = 0; q <= w; ++q) {
      const std::size_t idx = static_cast<std::size_t>(p) * w1 + q;
      const double occ_p = static_cast<double>(occ_at(p)) / s;
      const double occ_q = static_cast<double>(occ_at(q)) / s;
      double full;
      if (p == q) {
        full = occ_p - occ_p * occ_p;
      } else {
        full = static_cast<double>(pairs[idx]) / s - occ_p * occ_q;
      }
      est.connected[idx] = full;

      double mean = 0.0;
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const double rs = static_cast<double>(s - block_samples[b]);
        const double op = static_cast<double>(occ_at(p) - block_occ(b, p)) / rs;
        const double oq = static_cast<double>(occ_at(q) - block_occ(b, q)) / rs;
        if (p == q) {
          loo[b] = op - op * op;
        } else {
          const double pr =
              static_cast<double>(pairs[idx] - pair_blocks[b][idx]) / rs;
          loo[b] = pr - op * oq;
        }
        mean += loo[b];
      }
      mean /= nb;
      double var = 0.0;
      for (double v : loo) var += (v - mean) * (v - mean);
      est.sigma[idx] = std::sqrt(var * (nb - 1.0) / nb);
    }
  }
  return est;
}

}  // namespace dens
