#ifndef KELVINASYM_EXPAND_HPP
#define KELVINASYM_EXPAND_HPP

#include <vector>

#include "kelvinasym/radpoly.hpp"
#include "kelvinasym/symfun.hpp"

namespace kelvinasym {

// v0^2 [ sigma_1(A)|y|^2 / 3 + (lambda_1 y_1^2 + lambda_2 y_2^2 + lambda_3 y_3^2) / 2 ].
HomoPoly leading_correction_Q2(const Rational& v0, const Spectrum& s);

// Its image under h -> |y| Laplacian(|y| h):
// v0^2 [ 5 sigma_1(A)|y|^2 + 3 sum lambda_i y_i^2 ].
HomoPoly leading_source_Q2bar(const Rational& v0, const Spectrum& s);

// v = P + |y|^{n-2} Q at order l: deg P <= l, deg Q <= l - n + 2,
// Q(0) = 0 and grad Q(0) = 0.
struct ExpansionState {
  int n = 3;
  Spectrum spectrum;
  MultiPoly P;
  MultiPoly Q;
  int order = 2;

  static ExpansionState start(const Spectrum& s, const MultiPoly& p);
  void validate() const;
};

// Odd |y|-class of the n = 3 residual, written as |y|^{-1} W.
MultiPoly odd_class_n3(const RadPoly& residual);

// Degrees of the nonzero homogeneous components of the odd class.
std::vector<int> odd_class_degrees_n3(const RadPoly& residual);

// Solves for the degree-`order` part of Q that cancels the odd class in that
// degree and returns the state at order + 1.
ExpansionState next_correction_n3(const ExpansionState& state);

}  // namespace kelvinasym

#endif
