#include <map>
#include <vector>

#include "kelvinasym/errors.hpp"
#include "kelvinasym/radpoly.hpp"

namespace kelvinasym {

namespace {

// Fraction-free elimination of an integer system, then exact back
// substitution. Throws SolveError on a singular matrix.
std::vector<Rational> bareiss_solve(std::vector<std::vector<Integer>> m) {
  const std::size_t size = m.size();
  Integer prev(1);
  for (std::size_t k = 0; k < size; ++k) {
    std::size_t pivot = k;
    while (pivot < size && m[pivot][k] == 0) ++pivot;
    if (pivot == size) throw SolveError("singular radical-Poisson block");
    if (pivot != k) std::swap(m[pivot], m[k]);
    for (std::size_t i = k + 1; i < size; ++i) {
      for (std::size_t j = k + 1; j <= size; ++j) {
        Integer t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][k] = 0;
    }
    prev = m[k][k];
  }
  std::vector<Rational> x(size);
  for (std::size_t i = size; i-- > 0;) {
    Rational acc(m[i][size]);
    for (std::size_t j = i + 1; j < size; ++j) acc -= Rational(m[i][j]) * x[j];
    x[i] = acc / Rational(m[i][i]);
  }
  return x;
}

}  // namespace

Rational radical_poisson_constant(int n, int m) {
  return Rational(static_cast<long>(n - 2) * (2 * n - 4 + 2 * m));
}

HomoPoly solve_radical_poisson(const HomoPoly& h, int n) {
  if (n <= 2) throw DimensionError("radical-Poisson solve needs n >= 3, got " + std::to_string(n));
  if (h.n_vars() != n)
    throw DimensionError("right-hand side has " + std::to_string(h.n_vars()) +
                         " variables, expected " + std::to_string(n));
  const int m = h.degree();
  const long c = radical_poisson_constant(n, m).get_num().get_si();

  // c u + r^2 Laplacian(u) maps y^alpha to combinations of y^{alpha-2e_i+2e_j},
  // which keep the parity of every exponent: solve one block per parity class.
  std::map<std::vector<int>, std::vector<Exponent>> blocks;
  for (auto& e : monomials_of_degree(n, m)) {
    std::vector<int> parity(n);
    for (int i = 0; i < n; ++i) parity[i] = e[i] % 2;
    blocks[parity].push_back(std::move(e));
  }

  Integer lcm_den(1);
  for (const auto& [e, coef] : h.base().terms())
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), coef.get_den_mpz_t());

  MultiPoly u(n);
  for (const auto& [parity, basis] : blocks) {
    bool has_rhs = false;
    for (const auto& e : basis)
      if (h.base().coefficient(e) != 0) has_rhs = true;
    if (!has_rhs) continue;  // the block is invertible, so its solution is zero

    std::map<Exponent, std::size_t> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    const std::size_t size = basis.size();
    std::vector<std::vector<Integer>> a(size, std::vector<Integer>(size + 1, Integer(0)));
    for (std::size_t col = 0; col < size; ++col) {
      const Exponent& alpha = basis[col];
      a[col][col] += c;
      for (int i = 0; i < n; ++i) {
        if (alpha[i] < 2) continue;
        long w = static_cast<long>(alpha[i]) * (alpha[i] - 1);
        for (int j = 0; j < n; ++j) {
          Exponent beta = alpha;
          beta[i] -= 2;
          beta[j] += 2;
          a[index.at(beta)][col] += w;
        }
      }
    }
    for (std::size_t row = 0; row < size; ++row) {
      Rational scaled = h.base().coefficient(basis[row]) * Rational(lcm_den);
      a[row][size] = scaled.get_num();
    }
    std::vector<Rational> x = bareiss_solve(std::move(a));
    for (std::size_t i = 0; i < size; ++i) u.add_term(basis[i], x[i] / Rational(lcm_den));
  }

  RadPoly lhs = radpoly_laplacian(RadPoly::from_poly(u, n, n - 2), n);
  RadPoly rhs = RadPoly::from_poly(h.base(), n, n - 4);
  if (!(lhs == rhs)) throw SolveError("residual check failed after elimination");
  return HomoPoly(std::move(u), m);
}

}  // namespace kelvinasym
