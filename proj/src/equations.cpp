#include "kelvinasym/equations.hpp"

#include <cmath>

#include "kelvinasym/errors.hpp"

namespace kelvinasym {

namespace {

double binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double alt_sign(int k) { return k % 2 == 0 ? 1.0 : -1.0; }

std::vector<double> esp(std::span<const double> values) {
  std::vector<double> e(values.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t j = 0; j < values.size(); ++j)
    for (std::size_t k = j + 1; k >= 1; --k) e[k] += values[j] * e[k - 1];
  return e;
}

double principal_minor(const Mat& m, unsigned mask) {
  std::vector<int> idx;
  for (int i = 0; i < m.rows(); ++i)
    if (mask & (1u << i)) idx.push_back(i);
  const int k = static_cast<int>(idx.size());
  if (k == 0) return 1.0;
  Mat sub(k, k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) sub(r, c) = m(idx[r], idx[c]);
  return sub.determinant();
}

}  // namespace

AlgebraicForm AlgebraicForm::make(const PhaseBranch& branch, int n, bool theta_free) {
  branch.validate();
  AlgebraicForm f;
  f.branch = branch;
  f.n = n;
  f.theta_free = theta_free;
  f.even_weights.assign(n + 1, 0.0);
  f.odd_weights.assign(n + 1, 0.0);
  const double a = branch.a, b = branch.b;
  switch (branch.kind) {
    case BranchKind::SLAG:
      for (int m = 0; m <= n; ++m) {
        if (m % 2 == 0)
          f.even_weights[m] = alt_sign(m / 2);
        else
          f.odd_weights[m] = alt_sign((m - 1) / 2);
      }
      break;
    case BranchKind::ATAN2:
      // sigma_bar_k = sum_m sum_j C(m,j) C(n-m,k-j) (a-b)^{k-j} (a+b)^{n-m-k+j} sigma_m
      for (int k = 0; k <= n; ++k)
        for (int m = 0; m <= n; ++m) {
          double w = 0.0;
          for (int j = 0; j <= m; ++j)
            w += binom(m, j) * binom(n - m, k - j) *
                 (k - j >= 0 ? std::pow(a - b, k - j) : 0.0) *
                 std::pow(a + b, n - m - k + j);
          if (k % 2 == 0)
            f.even_weights[m] += alt_sign(k / 2) * w;
          else
            f.odd_weights[m] += alt_sign((k - 1) / 2) * w;
        }
      break;
    case BranchKind::RECIP:
      for (int m = 0; m <= n; ++m) {
        f.even_weights[m] = 1.0;
        f.odd_weights[m] = binom(n - m, n - 1 - m);
      }
      break;
    case BranchKind::LOG:
      for (int m = 0; m <= n; ++m) {
        f.even_weights[m] = std::pow(a + b, n - m);
        f.odd_weights[m] = std::pow(a - b, n - m);
      }
      break;
  }
  return f;
}

double AlgebraicForm::even(std::span<const double> sigmas) const {
  double s = 0.0;
  for (int m = 0; m <= n; ++m) s += even_weights[m] * sigmas[m];
  return s;
}

double AlgebraicForm::odd(std::span<const double> sigmas) const {
  double s = 0.0;
  for (int m = 0; m <= n; ++m) s += odd_weights[m] * sigmas[m];
  return s;
}

std::vector<double> sigma_numeric(const Mat& h) {
  const int n = static_cast<int>(h.rows());
  if (h.cols() != n) throw DimensionError("matrix must be square");
  std::vector<double> s(n + 1, 0.0);
  for (unsigned mask = 0; mask < (1u << n); ++mask)
    s[__builtin_popcount(mask)] += principal_minor(h, mask);
  return s;
}

std::vector<double> sigma_numeric(std::span<const double> eigenvalues) { return esp(eigenvalues); }

double algebraic_residual(const PhaseBranch& branch, const Mat& h, double theta) {
  const int n = static_cast<int>(h.rows());
  AlgebraicForm f = AlgebraicForm::make(branch, n, false);
  const std::vector<double> s = sigma_numeric(h);
  const double e = f.even(s), o = f.odd(s);
  const double scale = std::sqrt(branch.a * branch.a + 1.0);
  switch (branch.kind) {
    case BranchKind::SLAG: return std::cos(theta) * o - std::sin(theta) * e;
    case BranchKind::ATAN2: {
      const double t = theta * branch.b / scale;
      return std::sin(t) * e - std::cos(t) * o;
    }
    case BranchKind::RECIP: return -std::sqrt(2.0) * o - theta * e;
    case BranchKind::LOG: return o - std::exp(2.0 * branch.b * theta / scale) * e;
  }
  return 0.0;
}

double notheta_residual(const PhaseBranch& branch, std::span<const double> s, const Mat& h) {
  const int n = static_cast<int>(s.size());
  if (h.rows() != n || h.cols() != n) throw DimensionError("H and spectrum sizes differ");
  AlgebraicForm f = AlgebraicForm::make(branch, n, true);
  const std::vector<double> sa = esp(s), sh = sigma_numeric(h);
  return f.even(sa) * f.odd(sh) - f.odd(sa) * f.even(sh);
}

std::vector<double> notheta_expansion(const PhaseBranch& branch, std::span<const double> s,
                                      const Mat& n_matrix) {
  const int n = static_cast<int>(s.size());
  if (n_matrix.rows() != n || n_matrix.cols() != n) throw DimensionError("N and spectrum sizes differ");
  AlgebraicForm f = AlgebraicForm::make(branch, n, true);
  const std::vector<double> sa = esp(s);
  const double ea = f.even(sa), oa = f.odd(sa);
  std::vector<double> w(n + 1);
  for (int m = 0; m <= n; ++m) w[m] = ea * f.odd_weights[m] - oa * f.even_weights[m];

  // sigma_m(diag(s) + eps N) = sum_T eps^|T| det(N_T) sigma_{m-|T|}(s off T)
  std::vector<double> c(n + 1, 0.0);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    const int j = __builtin_popcount(mask);
    const double minor = principal_minor(n_matrix, mask);
    if (minor == 0.0) continue;
    std::vector<double> rest;
    for (int i = 0; i < n; ++i)
      if (!(mask & (1u << i))) rest.push_back(s[i]);
    const std::vector<double> er = esp(rest);
    double acc = 0.0;
    for (int m = j; m <= n; ++m) acc += w[m] * er[m - j];
    c[j] += minor * acc;
  }
  return c;
}

std::vector<double> per_index_linear_coefficients(const PhaseBranch& branch,
                                                  std::span<const double> s) {
  const int n = static_cast<int>(s.size());
  const double a = branch.a, b = branch.b;
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) {
    double prod = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double l = s[j];
      switch (branch.kind) {
        case BranchKind::SLAG: prod *= 1.0 + l * l; break;
        case BranchKind::RECIP: prod *= (1.0 + l) * (1.0 + l); break;
        case BranchKind::ATAN2: prod *= (l + a) * (l + a) + b * b; break;
        case BranchKind::LOG: prod *= (l + a) * (l + a) - b * b; break;
      }
    }
    switch (branch.kind) {
      case BranchKind::SLAG: c[i] = prod; break;
      case BranchKind::RECIP: c[i] = -prod; break;
      case BranchKind::ATAN2: c[i] = std::pow(2.0, n) * b * prod; break;
      case BranchKind::LOG: c[i] = 2.0 * b * prod; break;
    }
  }
  return c;
}

double linear_part_factor(const PhaseBranch& branch, std::span<const double> s) {
  const int n = static_cast<int>(s.size());
  const Vec r = scaling_matrix(branch, s);
  const std::vector<double> c = per_index_linear_coefficients(branch, s);
  const double gamma = c[0] * r[0] * r[0];
  for (int i = 1; i < n; ++i) {
    const double gi = c[i] * r[i] * r[i];
    if (std::abs(gi - gamma) > 1e-10 * std::max(1.0, std::abs(gamma)))
      throw MismatchError("per-index linear factors differ between indices 1 and " +
                          std::to_string(i + 1));
  }

  // Direct check: eps-linear coefficient of notheta(A + t N) for a fixed
  // nondegenerate jet, by interpolation at t = 0, 1/n, ..., 1.
  KelvinFrame frame = KelvinFrame::make(branch, std::vector<double>(s.begin(), s.end()));
  Jet2 jet;
  jet.y = Vec::LinSpaced(n, 0.3, -0.2);
  jet.y[0] += 0.05;
  jet.v = 0.7;
  jet.grad = Vec::LinSpaced(n, 0.1, 0.4);
  jet.hess = Mat::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) jet.hess(i, j) += 0.1 * (i + 1) * (j + 1) / n;
  const MNKL m = matrices_MNKL(jet, frame);
  const Mat a = frame.a_matrix();
  Mat vander(n + 1, n + 1);
  Vec values(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / n;
    for (int p = 0; p <= n; ++p) vander(k, p) = std::pow(t, p);
    values[k] = notheta_residual(branch, s, a + t * m.N);
  }
  const Vec coeffs = vander.fullPivLu().solve(values);
  const double expected = gamma * m.M.trace();
  if (std::abs(coeffs[1] - expected) > 1e-6 * std::max(1.0, std::abs(expected)))
    throw MismatchError("interpolated linear part " + std::to_string(coeffs[1]) +
                        " differs from gamma * trace(M) = " + std::to_string(expected));
  return gamma;
}

ResidualBreakdown transformed_residual(const Jet2& jet, const KelvinFrame& frame) {
  jet.validate();
  frame.validate();
  const int n = frame.n;
  const MNKL m = matrices_MNKL(jet, frame);
  const double r = jet.y.norm();
  const std::vector<double> c = notheta_expansion(frame.branch, frame.lambda, m.N);
  ResidualBreakdown out;
  out.linear_factor = linear_part_factor(frame.branch, frame.lambda);
  out.laplace_term = jet.hess.trace();
  out.linear_part = c[1] / (out.linear_factor * r * r);
  double nonlinear = 0.0;
  for (int j = 2; j <= n; ++j) nonlinear += c[j] * std::pow(r, n * (j - 1) - 2);
  out.nonlinear_term = nonlinear / out.linear_factor;
  out.total = out.laplace_term + out.nonlinear_term;
  return out;
}

}  // namespace kelvinasym
