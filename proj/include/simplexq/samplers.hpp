#pragma once

#include <cstdint>
#include <vector>

#include "simplexq/density.hpp"
#include "simplexq/detail/rng.hpp"
#include "simplexq/maximin.hpp"
#include "simplexq/prob_vector.hpp"

namespace simplexq {

// Stratified coupling: a uniformly random permutation assigns each of the m
// draws to its own quantile stratum ((j-1)/m, j/m], and each W_i is the
// inverse cdf of a uniform draw from its stratum. Marginally W_i ~ p, and
// sum W_i <= 1 + m E_p[X] holds deterministically (each stratum is used
// exactly once, so the sum telescopes against the quantile grid).
std::vector<double> sample_coupled(const SingleLetterDensity& p,
                                   std::uint64_t m, Rng& rng);

// Hard prior on the K-simplex: W_1..W_{K-1} coupled from the maximin density
// (mean 1/K), halved, last coordinate takes the remainder (>= 1/(2K) by the
// coupling bound), indices then permuted uniformly. `pstar` must be the
// maximin density for this K.
ProbVector sample_hard_prior(const SingleLetterDensity& pstar, std::uint64_t K,
                             Rng& rng);
// Convenience form that builds the density from the constants each call;
// hot loops should build the density once and use the overload above.
ProbVector sample_hard_prior(std::uint64_t K, const MaximinConstants& constants,
                             Rng& rng);

// Pairs of coordinates (x, 2/K - x) with x uniform on [0, 2/K]; odd K pins
// one coordinate at exactly 1/K. Indices permuted uniformly. Every
// coordinate is marginally Unif[0, 2/K] and the sum is 1 by construction.
ProbVector uniform_bad_prior(std::uint64_t K, Rng& rng);

}  // namespace simplexq
