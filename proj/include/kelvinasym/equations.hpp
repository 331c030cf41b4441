#ifndef KELVINASYM_EQUATIONS_HPP
#define KELVINASYM_EQUATIONS_HPP

#include <span>
#include <vector>

#include "kelvinasym/kelvin.hpp"
#include "kelvinasym/kelvin_symbolic.hpp"
#include "kelvinasym/symfun.hpp"

namespace kelvinasym {

// Every branch's algebraic equation is a combination of two linear forms in
// sigma_0(H)..sigma_n(H):  E(H) = sum_m even_weights[m] sigma_m(H),
// O(H) = sum_m odd_weights[m] sigma_m(H).
//   SLAG   E, O = alternating even/odd sigma sums
//   ATAN2  the same sums of the shifted sigma-bar
//   RECIP  E = det(I+H), O = sigma_{n-1}(I+H)
//   LOG    E = det(H+(a+b)I), O = det(H+(a-b)I)
// The theta-free residual is E(A) O(H) - O(A) E(H).
struct AlgebraicForm {
  PhaseBranch branch;
  int n = 0;
  bool theta_free = false;
  std::vector<double> even_weights;
  std::vector<double> odd_weights;

  static AlgebraicForm make(const PhaseBranch& branch, int n, bool theta_free);
  double even(std::span<const double> sigmas) const;
  double odd(std::span<const double> sigmas) const;
};

// sigma_0..sigma_n of a symmetric matrix (sums of principal minors).
std::vector<double> sigma_numeric(const Mat& h);
std::vector<double> sigma_numeric(std::span<const double> eigenvalues);

// Zero iff F(H) = theta (mod pi for the arctan branches).
double algebraic_residual(const PhaseBranch& branch, const Mat& h, double theta);

double notheta_residual(const PhaseBranch& branch, std::span<const double> s, const Mat& h);

// Coefficients c_0..c_n of notheta_residual(diag(s) + eps N) as a polynomial
// in eps, computed from principal minors of N without cancellation.
std::vector<double> notheta_expansion(const PhaseBranch& branch, std::span<const double> s,
                                      const Mat& n_matrix);

// Coefficient of N_ii in the eps-linear part (closed forms per branch).
std::vector<double> per_index_linear_coefficients(const PhaseBranch& branch,
                                                  std::span<const double> s);

// gamma with  eps-linear part = gamma |y|^{n+2} Laplacian(v).
double linear_part_factor(const PhaseBranch& branch, std::span<const double> s);

struct ResidualBreakdown {
  double laplace_term = 0.0;
  double nonlinear_term = 0.0;
  double total = 0.0;
  double linear_factor = 0.0;
  // eps-linear part of the residual after normalization; equals laplace_term.
  double linear_part = 0.0;
};

// notheta_residual(A + |y|^n N(jet)) / (gamma |y|^{n+2}).
ResidualBreakdown transformed_residual(const Jet2& jet, const KelvinFrame& frame);

// n = 3 SLAG residual  Laplacian(v) + |y| I_2 + |y|^4 I_3  for v = P + |y| Q.
RadPoly symbolic_residual_n3(const MultiPoly& p, const MultiPoly& q, const Spectrum& s);
// Same residual for any exact jet (e.g. indeterminate jets).
RadPoly residual_n3_from_jet(const SymbolicJet& jet, const Spectrum& s);

}  // namespace kelvinasym

#endif
