#include "kelvinasym/expand.hpp"

#include "kelvinasym/equations.hpp"
#include "kelvinasym/errors.hpp"

namespace kelvinasym {

namespace {

MultiPoly weighted_squares(const Spectrum& s) {
  MultiPoly p(3);
  for (int i = 0; i < 3; ++i) {
    Exponent e(3, 0);
    e[i] = 2;
    p.add_term(e, s.lambda[i]);
  }
  return p;
}

HomoPoly q2_form(const Rational& v0, const Spectrum& s, const Rational& radial,
                 const Rational& diagonal) {
  if (s.n() != 3) throw DimensionError("the leading correction is for n = 3");
  MultiPoly p = MultiPoly::r_squared(3, 3) * (radial * sigma(1, s)) + weighted_squares(s) * diagonal;
  return HomoPoly(p * (v0 * v0), 2);
}

}  // namespace

HomoPoly leading_correction_Q2(const Rational& v0, const Spectrum& s) {
  return q2_form(v0, s, Rational(1, 3), Rational(1, 2));
}

HomoPoly leading_source_Q2bar(const Rational& v0, const Spectrum& s) {
  return q2_form(v0, s, Rational(5), Rational(3));
}

ExpansionState ExpansionState::start(const Spectrum& s, const MultiPoly& p) {
  ExpansionState st;
  st.n = 3;
  st.spectrum = s;
  st.P = p;
  st.Q = MultiPoly(3);
  st.order = 2;
  st.validate();
  return st;
}

void ExpansionState::validate() const {
  if (n != 3) throw DimensionError("the correction recursion is implemented for n = 3");
  if (spectrum.n() != n || P.n_vars() != n || Q.n_vars() != n)
    throw DimensionError("state polynomials must have n variables");
  if (P.degree() > order)
    throw ValueError("deg P = " + std::to_string(P.degree()) + " exceeds order " +
                     std::to_string(order));
  if (Q.degree() > order - n + 2) throw ValueError("deg Q exceeds order - n + 2");
  if (!Q.homogeneous_part(0, n).is_zero() || !Q.homogeneous_part(1, n).is_zero())
    throw ValueError("Q must vanish to second order at 0");
}

MultiPoly odd_class_n3(const RadPoly& residual) {
  if (residual.dim() != 3) throw DimensionError("odd class extraction is for n = 3");
  return residual.parity_class(-1);
}

std::vector<int> odd_class_degrees_n3(const RadPoly& residual) {
  std::vector<int> out;
  for (const auto& [m, part] : odd_class_n3(residual).homogeneous_components(3)) out.push_back(m);
  return out;
}

ExpansionState next_correction_n3(const ExpansionState& state) {
  state.validate();
  const RadPoly residual = symbolic_residual_n3(state.P, state.Q, state.spectrum);
  const int m = state.order;
  // Laplacian(|y| u) = |y|^{-1}(c_m u + r^2 Laplacian u) must cancel the
  // degree-m part of the odd class.
  const MultiPoly source = odd_class_n3(residual).homogeneous_part(m, 3);
  ExpansionState next = state;
  next.order = m + 1;
  if (!source.is_zero()) next.Q += solve_radical_poisson(HomoPoly(-source, m), 3).base();
  next.validate();
  return next;
}

}  // namespace kelvinasym
