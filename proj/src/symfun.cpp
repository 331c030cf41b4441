#include "kelvinasym/symfun.hpp"

#include "kelvinasym/errors.hpp"

namespace kelvinasym {

std::vector<double> Spectrum::to_doubles() const {
  std::vector<double> out;
  out.reserve(lambda.size());
  for (const auto& q : lambda) out.push_back(q.get_d());
  return out;
}

Spectrum Spectrum::with_entry(int i, const Rational& value) const {
  if (i < 1 || i > n()) throw IndexError("index " + std::to_string(i) + " outside 1.." + std::to_string(n()));
  Spectrum out(*this);
  out.lambda[i - 1] = value;
  return out;
}

Spectrum Spectrum::without(int i) const {
  if (i < 1 || i > n()) throw IndexError("index " + std::to_string(i) + " outside 1.." + std::to_string(n()));
  Spectrum out(*this);
  out.lambda.erase(out.lambda.begin() + (i - 1));
  return out;
}

std::vector<Rational> elementary_symmetric(std::span<const Rational> values) {
  std::vector<Rational> e(values.size() + 1, Rational(0));
  e[0] = 1;
  for (std::size_t j = 0; j < values.size(); ++j)
    for (std::size_t k = j + 1; k >= 1; --k) e[k] += values[j] * e[k - 1];
  return e;
}

Rational sigma(int k, const Spectrum& s) {
  if (k < 0 || k > s.n()) return Rational(0);
  return elementary_symmetric(s.lambda)[k];
}

Rational sigma_hat(int k, int i, const Spectrum& s) { return sigma(k, s.without(i)); }

std::vector<Rational> sigma_bar_all(const Spectrum& s, const BranchParams& p) {
  // Coefficients in z of prod_j ((lambda_j + a + b) + z (lambda_j + a - b)),
  // i.e. the subset sum expanded one factor at a time.
  std::vector<Rational> c(s.n() + 1, Rational(0));
  c[0] = 1;
  for (int j = 0; j < s.n(); ++j) {
    Rational plus = s.lambda[j] + p.a + p.b;
    Rational minus = s.lambda[j] + p.a - p.b;
    for (int k = j + 1; k >= 1; --k) c[k] = c[k] * plus + c[k - 1] * minus;
    c[0] *= plus;
  }
  return c;
}

Rational sigma_bar(int k, const Spectrum& s, const BranchParams& p) {
  if (k < 0 || k > s.n()) return Rational(0);
  return sigma_bar_all(s, p)[k];
}

Rational determinant(RationalMatrix m) {
  const std::size_t n = m.size();
  Rational det(1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    while (pivot < n && m[pivot][k] == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != k) {
      std::swap(m[pivot], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      Rational f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

Rational sigma_of_matrix(int k, const RationalMatrix& m) {
  const int n = static_cast<int>(m.size());
  if (k < 0 || k > n) return Rational(0);
  if (k == 0) return Rational(1);
  Rational sum(0);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    RationalMatrix sub(k, std::vector<Rational>(k));
    for (int r = 0; r < k; ++r)
      for (int c = 0; c < k; ++c) sub[r][c] = m[idx[r]][idx[c]];
    sum += determinant(std::move(sub));
  }
  return sum;
}

Rational linear_coefficient_sigma(int k, const Spectrum& s, const RationalMatrix& b) {
  const int n = s.n();
  if (static_cast<int>(b.size()) != n) throw DimensionError("B must be n x n");
  for (const auto& row : b)
    if (static_cast<int>(row.size()) != n) throw DimensionError("B must be n x n");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (b[i][j] != b[j][i]) throw ValueError("B must be symmetric");

  // sigma_k(A + tB) has degree <= k in t; interpolate at t = 0..d.
  const int d = std::max(k, 1);
  RationalMatrix vander(d + 1, std::vector<Rational>(d + 2));
  for (int node = 0; node <= d; ++node) {
    RationalMatrix h(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h[i][j] = b[i][j] * node + (i == j ? s.lambda[i] : Rational(0));
    for (int p = 0; p <= d; ++p) vander[node][p] = pow(Rational(node), p);
    vander[node][d + 1] = sigma_of_matrix(k, h);
  }
  // Solve the Vandermonde system for the coefficients (Gauss-Jordan).
  for (int col = 0; col <= d; ++col) {
    int pivot = col;
    while (vander[pivot][col] == 0) ++pivot;
    std::swap(vander[pivot], vander[col]);
    for (int r = 0; r <= d; ++r) {
      if (r == col || vander[r][col] == 0) continue;
      Rational f = vander[r][col] / vander[col][col];
      for (int c = col; c <= d + 1; ++c) vander[r][c] -= f * vander[col][c];
    }
  }
  Rational interpolated = vander[1][d + 1] / vander[1][1];

  Rational lemma(0);
  for (int i = 1; i <= n; ++i) lemma += sigma_hat(k - 1, i, s) * b[i - 1][i - 1];
  if (interpolated != lemma)
    throw MismatchError("interpolated " + to_string(interpolated) + " vs diagonal formula " +
                        to_string(lemma));
  return interpolated;
}

std::string lemma_name(Lemma lemma) {
  switch (lemma) {
    case Lemma::L32: return "L32";
    case Lemma::L33: return "L33";
    case Lemma::L34: return "L34";
  }
  return "?";
}

Lemma parse_lemma(const std::string& name) {
  if (name == "L32") return Lemma::L32;
  if (name == "L33") return Lemma::L33;
  if (name == "L34") return Lemma::L34;
  throw ParseError("unknown lemma '" + name + "'");
}

namespace {

// sum_k (-1)^k f(2k + offset) over the indices 0 <= 2k + offset <= n,
// plus the index 2k + offset = -1 when offset is -1 (it contributes zero).
template <class F>
Rational alternating(int n, int offset, F&& f) {
  Rational sum(0);
  for (int k = 0; 2 * k + offset <= n; ++k) {
    Rational term = f(2 * k + offset);
    if (k % 2 == 0)
      sum += term;
    else
      sum -= term;
  }
  return sum;
}

ExactReport verify_l32(const Spectrum& s, int i) {
  const int n = s.n();
  if (n < 3) throw DimensionError("Lemma L32 needs n >= 3");
  if (i < 1 || i > n) throw IndexError("index outside 1..n");
  auto sig = [&](int k) { return sigma(k, s); };
  auto hat = [&](int k) { return sigma_hat(k, i, s); };
  Rational even_a = alternating(n, 0, sig);
  Rational odd_a = alternating(n, 1, sig);
  Rational lhs = even_a * alternating(n, 0, [&](int k) { return k + 1 <= n ? hat(k) : Rational(0); }) -
                 odd_a * alternating(n, -1, hat);
  Rational rhs(1);
  for (int j = 1; j <= n; ++j)
    if (j != i) rhs *= 1 + s.lambda[j - 1] * s.lambda[j - 1];
  return {Lemma::L32, lhs, rhs, lhs == rhs};
}

ExactReport verify_l33(const Spectrum& s, const BranchParams& p, int k) {
  const int n = s.n();
  Rational lhs = sigma_bar(k, s, p);
  // prod_j ((1+z) lambda_j + (a+b) + z(a-b)) = sum_m sigma_m (1+z)^m ((a+b)+z(a-b))^{n-m}
  Rational rhs(0);
  const Rational minus = p.a - p.b, plus = p.a + p.b;
  for (int m = 0; m <= n; ++m) {
    Rational weight(0);
    for (int j = 0; j <= m; ++j) {
      if (k - j < 0 || k - j > n - m) continue;
      weight += binomial(m, j) * binomial(n - m, k - j) * pow(minus, k - j) *
                pow(plus, n - m - k + j);
    }
    rhs += weight * sigma(m, s);
  }
  return {Lemma::L33, lhs, rhs, lhs == rhs};
}

ExactReport verify_l34(const Spectrum& s, const BranchParams& p, int i) {
  const int n = s.n();
  if (n < 3) throw DimensionError("Lemma L34 needs n >= 3");
  if (i < 1 || i > n) throw IndexError("index outside 1..n");
  const std::vector<Rational> bar = sigma_bar_all(s, p);
  const std::vector<Rational> upper = sigma_bar_all(s.with_entry(i, Rational(1)), p);
  const std::vector<Rational> lower = sigma_bar_all(s.with_entry(i, Rational(0)), p);
  auto at = [](const std::vector<Rational>& v, int k) {
    return k >= 0 && k < static_cast<int>(v.size()) ? v[k] : Rational(0);
  };
  auto diff = [&](int k) -> Rational { return at(upper, k) - at(lower, k); };
  Rational even_a = alternating(n, 0, [&](int k) { return at(bar, k); });
  Rational odd_a = alternating(n, 1, [&](int k) { return at(bar, k); });
  Rational lhs = even_a * alternating(n, 1, diff) - odd_a * alternating(n, 0, diff);
  Rational rhs = pow(Rational(2), n) * p.b;
  for (int j = 1; j <= n; ++j) {
    if (j == i) continue;
    Rational shifted = s.lambda[j - 1] + p.a;
    rhs *= shifted * shifted + p.b * p.b;
  }
  return {Lemma::L34, lhs, rhs, lhs == rhs};
}

}  // namespace

ExactReport verify_identity(Lemma lemma, const Spectrum& s, const std::optional<BranchParams>& p,
                            std::optional<int> aux) {
  if (!aux) throw ArityError(lemma_name(lemma) + " needs an index or degree");
  switch (lemma) {
    case Lemma::L32:
      if (p) throw ArityError("L32 takes no branch parameters");
      return verify_l32(s, *aux);
    case Lemma::L33:
      if (!p) throw ArityError("L33 needs branch parameters (a, b)");
      return verify_l33(s, *p, *aux);
    case Lemma::L34:
      if (!p) throw ArityError("L34 needs branch parameters (a, b)");
      return verify_l34(s, *p, *aux);
  }
  throw ValueError("unknown lemma");
}

}  // namespace kelvinasym
