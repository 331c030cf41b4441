#include "kelvinasym/equations.hpp"
#include "kelvinasym/errors.hpp"

namespace kelvinasym {

RadPoly residual_n3_from_jet(const SymbolicJet& jet, const Spectrum& s) {
  if (jet.n != 3 || s.n() != 3) throw DimensionError("the symbolic residual is for n = 3");
  const int nv = jet.v.n_vars();
  const SymbolicKL kl = symbolic_KL(jet);
  const auto& K = kl.K;
  const RadPoly& L = kl.L;
  std::vector<MultiPoly> y;
  for (int i = 0; i < 3; ++i) y.push_back(MultiPoly::variable(nv, i));
  const MultiPoly r2 = MultiPoly::r_squared(nv, 3);

  RadPoly lap(nv, 3);
  for (int i = 0; i < 3; ++i) lap += jet.hess[i][i];

  // |y|^2 times the 2x2 principal minors of M = K + L y y^T / |y|^2.
  RadPoly quad(nv, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      RadPoly minor = (K[i][i] * K[j][j] - K[i][j] * K[i][j]) * r2 +
                      L * (K[j][j] * (y[i] * y[i]) + K[i][i] * (y[j] * y[j]) -
                           K[i][j] * (y[i] * y[j]) * Rational(2));
      quad += minor * (s.lambda[i] + s.lambda[j]);
    }

  // |y|^2 det(M) = |y|^2 det(K) + L y^T adj(K) y.
  auto cof = [&](int i, int j) {
    const int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
    return K[i1][j1] * K[i2][j2] - K[i1][j2] * K[i2][j1];
  };
  RadPoly det_k(nv, 3), adj_form(nv, 3);
  std::vector<std::vector<RadPoly>> c(3, std::vector<RadPoly>(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i][j] = cof(i, j);
  for (int j = 0; j < 3; ++j) det_k += K[0][j] * c[0][j];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) adj_form += c[j][i] * (y[i] * y[j]);
  RadPoly cubic = det_k * r2 + L * adj_form;

  const Rational weight = -(1 - sigma(2, s));
  return lap + quad.times_radial(-1) + cubic.times_radial(2) * weight;
}

RadPoly symbolic_residual_n3(const MultiPoly& p, const MultiPoly& q, const Spectrum& s) {
  if (s.n() != 3 || p.n_vars() != 3 || q.n_vars() != 3)
    throw DimensionError("the symbolic residual is for n = 3");
  RadPoly v = RadPoly::from_poly(p, 3, 0) + RadPoly::from_poly(q, 3, 1);
  return residual_n3_from_jet(jet_of(v), s);
}

}  // namespace kelvinasym
