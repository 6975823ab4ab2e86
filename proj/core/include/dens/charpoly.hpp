// GL(N) characters evaluated three independent ways, plus the measure weight
// Delta(h) * chi_h({alpha}) of a level configuration.
//
// Sign convention: characters are Schur polynomials, strictly positive for
// positive alphas, and the Vandermonde is taken as |Delta(h)| so the weight
// is non-negative. The printed Delta = prod_{m>j}(h_m - h_j) flips sign with
// N; it always appears paired with the antisymmetric determinant, so the
// normalized measure is unchanged. The enumeration oracle pins this choice.
#pragma once

#include "dens/ensemble.hpp"

namespace dens {

// Sum over GT patterns of prod_j alpha_j^{l_j}. At all alphas = 1 this is the
// representation dimension.
double character_gt(const Weights& weights, const AlphaSpec& alphas);

// det_{k,j} alpha_k^{h_j} normalized by the vacuum determinant
// det_{k,j} alpha_k^{N-j}. Requires pairwise-distinct alphas; throws
// std::domain_error when any |alpha_j - alpha_k| < AlphaSpec::kDegenerateTol
// (callers route to character_equal or the series path instead).
double character_det(const LevelConfig& config, const AlphaSpec& alphas);

// Confluent limit of character_det as all alphas -> alpha:
//   dim * alpha^{sum m_k},  dim = prod_{j<m}(h_j - h_m) / prod_{k<N} k!.
double character_equal(const LevelConfig& config, double alpha);

// prod_{j<m} (h_j - h_m) > 0 for strictly decreasing levels.
double vandermonde_abs(const Levels& levels);

// Representation dimension from the Weyl formula (integer-valued).
double dimension(const Weights& weights);

// Unnormalized measure weight |Delta(h)| * chi_h({alpha}). Accepts arbitrary
// level tuples: returns 0 when two levels coincide, and is symmetric under
// permutations of the levels.
double measure_weight(const Levels& levels, const AlphaSpec& alphas);
double measure_weight(const LevelConfig& config, const AlphaSpec& alphas);

}  // namespace dens
