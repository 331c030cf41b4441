#ifndef KELVINASYM_MULTIPOLY_HPP
#define KELVINASYM_MULTIPOLY_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "kelvinasym/rational.hpp"

namespace kelvinasym {

using Exponent = std::vector<int>;

// Sparse polynomial with exact coefficients. Terms are ordered
// lexicographically with the first variable most significant.
class MultiPoly {
 public:
  using TermMap = std::map<Exponent, Rational>;

  MultiPoly() = default;
  explicit MultiPoly(int n_vars);

  static MultiPoly constant(int n_vars, const Rational& c);
  static MultiPoly variable(int n_vars, int index);
  static MultiPoly monomial(const Exponent& e, const Rational& c);
  // y_1^2 + ... + y_dim^2 in a ring of n_vars variables.
  static MultiPoly r_squared(int n_vars, int dim);

  int n_vars() const { return n_vars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Total degree in the variables [first, first + count); -1 for zero.
  int degree(int first = 0, int count = -1) const;
  Rational coefficient(const Exponent& e) const;
  Rational constant_term() const;
  void add_term(const Exponent& e, const Rational& c);

  // Part of degree m in the first dim variables.
  MultiPoly homogeneous_part(int m, int dim) const;
  std::map<int, MultiPoly> homogeneous_components(int dim) const;
  bool is_homogeneous(int m, int dim) const;

  MultiPoly derivative(int var) const;
  MultiPoly scaled(const Rational& c) const;
  // Multiplies by y^e (e may be shorter than n_vars).
  MultiPoly times_monomial(const Exponent& e) const;
  // Same polynomial in a larger ring; new variables are appended.
  MultiPoly embedded(int new_n_vars) const;

  double evaluate(std::span<const double> point) const;
  Rational evaluate(std::span<const Rational> point) const;

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(const MultiPoly& other);
  MultiPoly& operator*=(const Rational& c);
  MultiPoly operator-() const;

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const Rational& c) { return a *= c; }
  friend MultiPoly operator*(const Rational& c, MultiPoly a) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  void check_ring(const MultiPoly& other) const;

  int n_vars_ = 0;
  TermMap terms_;
};

// Sum of the pure second derivatives in the first n variables.
MultiPoly poly_laplacian(const MultiPoly& p, int n);

// p = r^2 * quotient + remainder, where r^2 sums the squares of the first
// dim variables and the remainder has degree <= 1 in the first variable.
struct R2Division {
  MultiPoly quotient;
  MultiPoly remainder;
};
R2Division divide_by_r2(const MultiPoly& p, int dim);

// A polynomial of fixed total degree.
class HomoPoly {
 public:
  HomoPoly(MultiPoly base, int degree);
  const MultiPoly& base() const { return base_; }
  int degree() const { return degree_; }
  int n_vars() const { return base_.n_vars(); }
  friend bool operator==(const HomoPoly& a, const HomoPoly& b) {
    return a.degree_ == b.degree_ && a.base_ == b.base_;
  }

 private:
  MultiPoly base_;
  int degree_;
};

// All exponents of total degree m in n variables, in lexicographic order.
std::vector<Exponent> monomials_of_degree(int n, int m);

}  // namespace kelvinasym

#endif
