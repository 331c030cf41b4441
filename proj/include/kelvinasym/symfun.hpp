#ifndef KELVINASYM_SYMFUN_HPP
#define KELVINASYM_SYMFUN_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kelvinasym/rational.hpp"

namespace kelvinasym {

// Eigenvalues of the diagonal matrix A.
struct Spectrum {
  std::vector<Rational> lambda;

  Spectrum() = default;
  explicit Spectrum(std::vector<Rational> values) : lambda(std::move(values)) {}
  int n() const { return static_cast<int>(lambda.size()); }
  std::vector<double> to_doubles() const;
  // A with lambda_i replaced by `value` (0 gives A_(i), 1 gives A^(i)); i is 1-based.
  Spectrum with_entry(int i, const Rational& value) const;
  Spectrum without(int i) const;
};

struct BranchParams {
  Rational a;
  Rational b;
};

using RationalMatrix = std::vector<std::vector<Rational>>;

// All elementary symmetric polynomials sigma_0..sigma_n.
std::vector<Rational> elementary_symmetric(std::span<const Rational> values);

Rational sigma(int k, const Spectrum& s);
// sigma_k with lambda_i removed; i is 1-based.
Rational sigma_hat(int k, int i, const Spectrum& s);
// sum over |S| = k of prod_{S}(lambda + a - b) prod_{not S}(lambda + a + b).
Rational sigma_bar(int k, const Spectrum& s, const BranchParams& p);
std::vector<Rational> sigma_bar_all(const Spectrum& s, const BranchParams& p);

Rational determinant(RationalMatrix m);
// Sum of the k x k principal minors.
Rational sigma_of_matrix(int k, const RationalMatrix& m);

// Coefficient of t in sigma_k(A + tB), by exact interpolation; cross-checked
// against sum_i sigma_hat_{k-1,i} B_ii.
Rational linear_coefficient_sigma(int k, const Spectrum& s, const RationalMatrix& b);

enum class Lemma { L32, L33, L34 };
std::string lemma_name(Lemma lemma);
Lemma parse_lemma(const std::string& name);

struct ExactReport {
  Lemma lemma;
  Rational lhs;
  Rational rhs;
  bool equal;
};

// aux is the index i (L32, L34; 1-based) or the degree k (L33).
ExactReport verify_identity(Lemma lemma, const Spectrum& s,
                            const std::optional<BranchParams>& p, std::optional<int> aux);

}  // namespace kelvinasym

#endif
