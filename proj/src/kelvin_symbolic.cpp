#include "kelvinasym/kelvin_symbolic.hpp"

#include "kelvinasym/errors.hpp"

namespace kelvinasym {

int JetLayout::hess_var(int i, int j) const {
  if (i > j) std::swap(i, j);
  // Offset of row i in the packed upper triangle.
  const int row_start = i * n - i * (i - 1) / 2;
  return 2 * n + 1 + row_start + (j - i);
}

std::vector<std::string> JetLayout::names() const {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("y" + std::to_string(i + 1));
  out.push_back("v");
  for (int i = 0; i < n; ++i) out.push_back("g" + std::to_string(i + 1));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.push_back("h" + std::to_string(i + 1) + std::to_string(j + 1));
  for (int k = 0; k < extra; ++k) out.push_back("t" + std::to_string(k + 1));
  return out;
}

SymbolicJet indeterminate_jet(const JetLayout& layout) {
  const int n = layout.n, nv = layout.n_vars();
  auto var = [&](int idx) { return RadPoly::from_poly(MultiPoly::variable(nv, idx), n); };
  SymbolicJet jet;
  jet.n = n;
  jet.v = var(layout.value_var());
  for (int i = 0; i < n; ++i) jet.grad.push_back(var(layout.grad_var(i)));
  jet.hess.assign(n, std::vector<RadPoly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) jet.hess[i][j] = var(layout.hess_var(i, j));
  return jet;
}

SymbolicJet jet_of(const RadPoly& v) {
  SymbolicJet jet;
  jet.n = v.dim();
  jet.v = v;
  for (int i = 0; i < jet.n; ++i) jet.grad.push_back(v.derivative(i));
  jet.hess.assign(jet.n, std::vector<RadPoly>(jet.n));
  for (int i = 0; i < jet.n; ++i)
    for (int j = 0; j <= i; ++j) jet.hess[i][j] = jet.hess[j][i] = jet.grad[i].derivative(j);
  return jet;
}

SymbolicKL symbolic_KL(const SymbolicJet& jet) {
  const int n = jet.n;
  const int nv = jet.v.n_vars();
  auto coord = [&](int i) { return MultiPoly::variable(nv, i); };
  const MultiPoly r2 = MultiPoly::r_squared(nv, n);

  RadPoly ygrad(nv, n);
  std::vector<RadPoly> hy(n, RadPoly(nv, n));
  for (int k = 0; k < n; ++k) {
    ygrad += jet.grad[k] * coord(k);
    for (int i = 0; i < n; ++i) hy[i] += jet.hess[i][k] * coord(k);
  }
  RadPoly yhy(nv, n);
  for (int i = 0; i < n; ++i) yhy += hy[i] * coord(i);

  SymbolicKL out;
  out.L = jet.v * Rational(n * (n - 2)) + ygrad * Rational(4 * n) + yhy * Rational(4);
  const RadPoly diag = jet.v * Rational(n - 2) + ygrad * Rational(2);
  out.K.assign(n, std::vector<RadPoly>(n));
  out.M.assign(n, std::vector<RadPoly>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      RadPoly k = jet.hess[i][j] * r2;
      if (i == j) k -= diag;
      k -= (jet.grad[j] * coord(i) + jet.grad[i] * coord(j)) * Rational(n);
      k -= (hy[j] * coord(i) + hy[i] * coord(j)) * Rational(2);
      RadPoly yy = RadPoly::from_poly(coord(i) * coord(j), n, -2);
      out.M[i][j] = out.M[j][i] = k + yy * out.L;
      out.K[i][j] = out.K[j][i] = std::move(k);
    }
  return out;
}

RadPoly trace_identity_defect(int n) {
  if (n < 2) throw DimensionError("trace identity needs n >= 2");
  JetLayout layout{n, 0};
  SymbolicJet jet = indeterminate_jet(layout);
  SymbolicKL kl = symbolic_KL(jet);
  RadPoly trace(layout.n_vars(), n), lap(layout.n_vars(), n);
  for (int i = 0; i < n; ++i) {
    trace += kl.M[i][i];
    lap += jet.hess[i][i];
  }
  return trace - lap * MultiPoly::r_squared(layout.n_vars(), n);
}

}  // namespace kelvinasym
