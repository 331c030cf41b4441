#ifndef KELVINASYM_RADPOLY_HPP
#define KELVINASYM_RADPOLY_HPP

#include <map>
#include <span>
#include <string>

#include "kelvinasym/multipoly.hpp"

namespace kelvinasym {

// Finite sum  sum_k |y|^k p_k  where |y| is the norm of the first dim
// variables. Further variables (if any) are passive indeterminates.
//
// Canonical form: every p_k has degree <= 1 in y_1 after division by r^2;
// the quotient moves to slot k + 2. This representation is unique, so
// slotwise comparison decides equality.
class RadPoly {
 public:
  using SlotMap = std::map<int, MultiPoly>;

  RadPoly() = default;
  RadPoly(int n_vars, int dim);

  static RadPoly from_poly(const MultiPoly& p, int dim, int k = 0);
  static RadPoly radial_power(int n_vars, int dim, int k);
  // Keeps the given slots as they are; for tests of canonicalization.
  static RadPoly raw(int n_vars, int dim, SlotMap slots);

  int n_vars() const { return n_vars_; }
  int dim() const { return dim_; }
  const SlotMap& slots() const { return slots_; }
  bool is_zero() const { return slots_.empty(); }
  bool is_canonical() const;
  MultiPoly slot(int k) const;
  int min_slot() const;
  int max_slot() const;

  RadPoly canonicalized() const;

  // The slots with k = k0 (mod 2) collected as |y|^k0 * P, which requires
  // every such slot to satisfy k >= k0.
  MultiPoly parity_class(int k0) const;

  RadPoly derivative(int var) const;
  RadPoly times_radial(int k) const;

  double evaluate(std::span<const double> point) const;

  RadPoly& operator+=(const RadPoly& other);
  RadPoly& operator-=(const RadPoly& other);
  RadPoly& operator*=(const Rational& c);
  RadPoly operator-() const;
  friend RadPoly operator+(RadPoly a, const RadPoly& b) { return a += b; }
  friend RadPoly operator-(RadPoly a, const RadPoly& b) { return a -= b; }
  friend RadPoly operator*(const RadPoly& a, const RadPoly& b);
  friend RadPoly operator*(RadPoly a, const Rational& c) { return a *= c; }
  friend RadPoly operator*(const Rational& c, RadPoly a) { return a *= c; }
  friend RadPoly operator*(const RadPoly& a, const MultiPoly& p);
  friend bool operator==(const RadPoly& a, const RadPoly& b);

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  void check_ring(const RadPoly& other) const;
  void add_slot(int k, const MultiPoly& p);
  void canonicalize();

  int n_vars_ = 0;
  int dim_ = 0;
  SlotMap slots_;
};

// Exact Laplacian over the first n variables, n == e.dim().
RadPoly radpoly_laplacian(const RadPoly& e, int n);

// Unique homogeneous u of the same degree with
//   Laplacian(|y|^{n-2} u) = |y|^{n-4} h,   n >= 3.
HomoPoly solve_radical_poisson(const HomoPoly& h, int n);

// Constant c_m = (n-2)(2n-4+2m) of the equation c_m u + r^2 Laplacian(u) = h.
Rational radical_poisson_constant(int n, int m);

}  // namespace kelvinasym

#endif
