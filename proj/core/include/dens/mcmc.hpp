// Metropolis sampler for the level measure. Elementary proposal: pick a level
// uniformly and move it by +-1 (uniform), rejecting moves that break strict
// ordering or positivity; acceptance min(1, w'/w) on the measure weight. One
// chain step is a sweep of N elementary proposals, and the histograms
// accumulate one sample per sweep.
//
// RNG: std::mt19937_64 (the algorithm is fully specified by the C++
// standard), with uniform doubles drawn as (x >> 11) * 2^-53 and integers by
// modulo so histograms are bit-identical across platforms for a fixed seed.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dens/ensemble.hpp"
#include "dens/exact_kernel.hpp"

namespace dens {

struct McmcOptions {
  std::int64_t steps = 1'000'000;
  std::uint64_t seed = 1;
  double burn_in_fraction = 0.1;
  int pair_window = 32;  // raw pair counts accumulated on [0,w]^2
  int blocks = 24;       // jackknife blocks over the post-burn-in stretch
};

class McmcChain {
 public:
  McmcChain(const AlphaSpec& alphas, const McmcOptions& opts);

  void run();

  const AlphaSpec& alphas() const { return alphas_; }
  const McmcOptions& options() const { return opts_; }
  const Levels& state() const { return h_; }
  std::int64_t samples() const { return samples_; }
  double acceptance_rate() const;

  // Raw post-burn-in tallies. counts()[p] sums the 0/1 occupation of site p
  // over samples; block-resolved copies feed the jackknife.
  const std::vector<std::int64_t>& counts() const { return counts_; }
  const std::vector<std::vector<std::int64_t>>& block_counts() const {
    return block_counts_;
  }
  int pair_window() const { return opts_.pair_window; }
  const std::vector<std::int64_t>& pair_counts() const { return pair_counts_; }
  const std::vector<std::vector<std::int64_t>>& block_pair_counts() const {
    return block_pair_counts_;
  }

  // Acceptance ratio w(h')/w(h) for moving level k by delta. Equal alphas use
  // the O(N) incremental product; full_weight_ratio recomputes over every pair
  // in O(N^2) as an independent check of the same quantity.
  double weight_ratio(int k, int delta) const;
  double full_weight_ratio(int k, int delta) const;

 private:
  AlphaSpec alphas_;
  McmcOptions opts_;
  Levels h_;
  std::mt19937_64 rng_;
  std::int64_t samples_ = 0;
  std::int64_t accepted_ = 0;
  std::int64_t proposals_ = 0;
  std::vector<std::int64_t> counts_;
  std::vector<std::vector<std::int64_t>> block_counts_;
  std::vector<std::int64_t> pair_counts_;
  std::vector<std::vector<std::int64_t>> block_pair_counts_;
};

// Run a fresh chain to completion.
McmcChain mcmc_sample(const AlphaSpec& alphas, std::int64_t steps,
                      std::uint64_t seed);

struct DensityEstimate {
  DensityProfile profile;
  std::vector<double> sigma;  // jackknife error bar per site
  bool usable = true;         // false when there are too few samples/blocks
};

struct PairEstimate {
  int window = 0;
  std::vector<double> connected;  // (w+1)^2 row-major
  std::vector<double> sigma;
  bool usable = true;

  double at(int p, int q) const {
    return connected[static_cast<std::size_t>(p) * (window + 1) + q];
  }
  double sigma_at(int p, int q) const {
    return sigma[static_cast<std::size_t>(p) * (window + 1) + q];
  }
};

DensityEstimate estimate_density(const McmcChain& chain);
PairEstimate estimate_pair(const McmcChain& chain);

}  // namespace dens
