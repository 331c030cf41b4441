#ifndef KELVINASYM_KELVIN_SYMBOLIC_HPP
#define KELVINASYM_KELVIN_SYMBOLIC_HPP

#include <vector>

#include "kelvinasym/radpoly.hpp"

namespace kelvinasym {

// Exact second-order jet whose entries live in a RadPoly ring over y.
struct SymbolicJet {
  int n = 0;
  RadPoly v;
  std::vector<RadPoly> grad;
  std::vector<std::vector<RadPoly>> hess;
};

// Variable layout of the indeterminate jet ring:
//   y_1..y_n, v, g_1..g_n, h_ij (i <= j, row-major), then `extra` variables.
struct JetLayout {
  int n = 0;
  int extra = 0;
  int n_vars() const { return 2 * n + 1 + n * (n + 1) / 2 + extra; }
  int value_var() const { return n; }
  int grad_var(int i) const { return n + 1 + i; }
  int hess_var(int i, int j) const;
  int extra_var(int k) const { return 2 * n + 1 + n * (n + 1) / 2 + k; }
  std::vector<std::string> names() const;
};

// Jet with independent indeterminates for v, grad and the symmetric Hessian.
SymbolicJet indeterminate_jet(const JetLayout& layout);

// Exact jet of a RadPoly field v (derivatives in the first dim variables).
SymbolicJet jet_of(const RadPoly& v);

struct SymbolicKL {
  std::vector<std::vector<RadPoly>> K;
  std::vector<std::vector<RadPoly>> M;
  RadPoly L;
};

SymbolicKL symbolic_KL(const SymbolicJet& jet);

// trace(M) - |y|^2 * Laplacian(v) over indeterminate jets; the zero RadPoly
// when the trace identity holds.
RadPoly trace_identity_defect(int n);

}  // namespace kelvinasym

#endif
