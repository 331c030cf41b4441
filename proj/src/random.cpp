#include "kelvinasym/random.hpp"

#include "kelvinasym/errors.hpp"

namespace kelvinasym {

Rng trial_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6b656c76u};
  return Rng(seq);
}

Rational random_rational(Rng& rng) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 7);
  int p = num(rng);
  int q = den(rng);
  Rational r(p, q);
  r.canonicalize();
  return r;
}

Rational random_nonzero_rational(Rng& rng) {
  for (;;) {
    Rational r = random_rational(rng);
    if (r != 0) return r;
  }
}

Spectrum random_spectrum(int n, Rng& rng) {
  std::vector<Rational> values;
  for (int i = 0; i < n; ++i) values.push_back(random_rational(rng));
  return Spectrum(std::move(values));
}

MultiPoly random_homogeneous(int n_vars, int m, Rng& rng, double density) {
  std::bernoulli_distribution keep(density);
  MultiPoly p(n_vars);
  for (const auto& e : monomials_of_degree(n_vars, m))
    if (keep(rng)) p.add_term(e, random_rational(rng));
  return p;
}

MultiPoly random_poly(int n_vars, int lo, int hi, Rng& rng, double density) {
  MultiPoly p(n_vars);
  for (int m = lo; m <= hi; ++m) p += random_homogeneous(n_vars, m, rng, density);
  return p;
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

MultiPoly random_test_jet(int n_vars, int degree, Rational scale, Rng& rng) {
  if (scale <= 0) throw ValueError("jet scale must be positive");
  MultiPoly v = MultiPoly::constant(n_vars, Rational(1));
  Rational factor(1);
  for (int k = 1; k <= degree; ++k) {
    factor /= scale;
    v += random_homogeneous(n_vars, k, rng) * factor;
  }
  return v;
}

}  // namespace kelvinasym
