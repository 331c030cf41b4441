#ifndef KELVINASYM_RANDOM_HPP
#define KELVINASYM_RANDOM_HPP

#include <cstdint>
#include <random>

#include "kelvinasym/multipoly.hpp"
#include "kelvinasym/symfun.hpp"

namespace kelvinasym {

using Rng = std::mt19937_64;

// Independent stream for trial `index` of a run seeded with `seed`.
Rng trial_rng(std::uint64_t seed, std::uint64_t index);

// Numerator in [-5, 5], denominator in [1, 7].
Rational random_rational(Rng& rng);
Rational random_nonzero_rational(Rng& rng);
Spectrum random_spectrum(int n, Rng& rng);
// Each monomial of degree m is present with probability `density`.
MultiPoly random_homogeneous(int n_vars, int m, Rng& rng, double density = 1.0);
// Sum of random homogeneous parts of degrees lo..hi.
MultiPoly random_poly(int n_vars, int lo, int hi, Rng& rng, double density = 1.0);
double uniform(Rng& rng, double lo, double hi);
// 1 + sum_{k=1..degree} scale^{-k} P_k with random homogeneous P_k: a jet
// whose value at 0 dominates its variation on |y| < 1/scale.
MultiPoly random_test_jet(int n_vars, int degree, Rational scale, Rng& rng);

}  // namespace kelvinasym

#endif
