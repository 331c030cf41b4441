#include "kelvinasym/kelvin.hpp"

#include <cmath>
#include <sstream>

#include "kelvinasym/errors.hpp"

namespace kelvinasym {

Vec scaling_matrix(const PhaseBranch& branch, std::span<const double> lambda) {
  const int n = static_cast<int>(lambda.size());
  Vec r(n);
  const double a = branch.a, b = branch.b;
  for (int i = 0; i < n; ++i) {
    const double l = lambda[i];
    if (!branch.admissible(l)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << branch_name(branch.kind) << " needs lambda_" << i + 1 << " > "
          << branch.admissible_lower_bound() << ", got " << l;
      throw AdmissibilityError(msg.str());
    }
    switch (branch.kind) {
      case BranchKind::SLAG: r[i] = std::sqrt(1.0 + l * l); break;
      case BranchKind::RECIP: r[i] = std::pow(2.0, -0.25) * (1.0 + l); break;
      case BranchKind::LOG:
        r[i] = std::pow(a * a + 1.0, -0.25) * std::sqrt((l + a) * (l + a) - b * b);
        break;
      case BranchKind::ATAN2:
        r[i] = std::pow(a * a + 1.0, -0.25) * std::sqrt((l + a) * (l + a) + b * b);
        break;
    }
  }
  return r;
}

Vec kelvin_map(const Vec& point, const Vec& r_diag, KelvinDirection direction) {
  if (point.size() != r_diag.size()) throw DimensionError("point and R sizes differ");
  if (direction == KelvinDirection::Forward) {
    Vec rx = r_diag.cwiseProduct(point);
    const double n2 = rx.squaredNorm();
    if (n2 == 0.0) throw ZeroPointError("forward Kelvin map at x = 0");
    return rx / n2;
  }
  const double n2 = point.squaredNorm();
  if (n2 == 0.0) throw ZeroPointError("backward Kelvin map at y = 0");
  return point.cwiseQuotient(r_diag) / n2;
}

KelvinFrame KelvinFrame::make(const PhaseBranch& branch, std::vector<double> lambda, Vec linear,
                              double constant) {
  KelvinFrame f;
  f.n = static_cast<int>(lambda.size());
  f.branch = branch;
  f.r_diag = scaling_matrix(branch, lambda);
  f.lambda = std::move(lambda);
  f.linear = linear.size() == 0 ? Vec::Zero(f.n) : linear;
  f.constant = constant;
  f.validate();
  return f;
}

void KelvinFrame::validate() const {
  if (n < 1 || static_cast<int>(lambda.size()) != n || r_diag.size() != n || linear.size() != n)
    throw DimensionError("frame sizes inconsistent");
  branch.validate();
  for (int i = 0; i < n; ++i)
    if (!(r_diag[i] > 0)) throw ValueError("R entries must be positive");
  Vec expected = scaling_matrix(branch, lambda);
  if ((expected - r_diag).cwiseAbs().maxCoeff() > 1e-12)
    throw ValueError("R does not match the branch scaling matrix");
}

Mat KelvinFrame::a_matrix() const {
  Mat a = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) a(i, i) = lambda[i];
  return a;
}

void Jet2::validate() const {
  const auto n = y.size();
  if (grad.size() != n || hess.rows() != n || hess.cols() != n)
    throw DimensionError("jet sizes inconsistent");
  if ((hess - hess.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValueError("jet Hessian is not symmetric");
  if (y.norm() == 0.0) throw ZeroPointError("jet at y = 0");
}

double u_from_v(const KelvinFrame& frame, const ScalarField& v, const Vec& x) {
  Vec y = kelvin_map(x, frame.r_diag, KelvinDirection::Forward);
  double quad = 0.0;
  for (int i = 0; i < frame.n; ++i) quad += 0.5 * frame.lambda[i] * x[i] * x[i];
  return quad + frame.linear.dot(x) + frame.constant +
         std::pow(y.norm(), frame.n - 2) * v(y);
}

MNKL matrices_MNKL(const Jet2& jet, const KelvinFrame& frame) {
  const int n = static_cast<int>(jet.y.size());
  if (n != frame.n) throw DimensionError("jet and frame dimensions differ");
  const Vec& y = jet.y;
  const double r2 = y.squaredNorm();
  if (r2 == 0.0) throw ZeroPointError("M at y = 0");
  const double ygrad = y.dot(jet.grad);
  const Vec hy = jet.hess * y;
  MNKL out;
  out.L = n * (n - 2) * jet.v + 4.0 * n * ygrad + 4.0 * y.dot(hy);
  out.K = r2 * jet.hess;
  out.K.diagonal().array() -= (n - 2) * jet.v + 2.0 * ygrad;
  out.K -= n * (y * jet.grad.transpose() + jet.grad * y.transpose());
  out.K -= 2.0 * (y * hy.transpose() + hy * y.transpose());
  out.M = out.K + (y * y.transpose()) * (out.L / r2);
  out.N = frame.r_diag.asDiagonal() * out.M * frame.r_diag.asDiagonal();
  return out;
}

PolyJet::PolyJet(const MultiPoly& v) : n_(v.n_vars()), v_(v) {
  for (int i = 0; i < n_; ++i) grad_.push_back(v.derivative(i));
  hess_.resize(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) hess_[i].push_back(grad_[i].derivative(j));
}

double PolyJet::value(const Vec& y) const {
  return v_.evaluate(std::span<const double>(y.data(), y.size()));
}

Jet2 PolyJet::at(const Vec& y) const {
  if (y.size() != n_) throw DimensionError("jet point size");
  std::span<const double> p(y.data(), y.size());
  Jet2 jet;
  jet.y = y;
  jet.v = v_.evaluate(p);
  jet.grad = Vec(n_);
  jet.hess = Mat(n_, n_);
  for (int i = 0; i < n_; ++i) {
    jet.grad[i] = grad_[i].evaluate(p);
    for (int j = 0; j < n_; ++j) jet.hess(i, j) = hess_[i][j].evaluate(p);
  }
  return jet;
}

Mat finite_difference_hessian(const ScalarField& f, const Vec& x, double step) {
  const auto n = x.size();
  Mat h(n, n);
  const double f0 = f(x);
  for (Eigen::Index i = 0; i < n; ++i) {
    Vec xp = x, xm = x;
    xp[i] += step;
    xm[i] -= step;
    h(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (step * step);
    for (Eigen::Index j = 0; j < i; ++j) {
      Vec pp = x, pm = x, mp = x, mm = x;
      pp[i] += step; pp[j] += step;
      pm[i] += step; pm[j] -= step;
      mp[i] -= step; mp[j] += step;
      mm[i] -= step; mm[j] -= step;
      h(i, j) = h(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * step * step);
    }
  }
  return h;
}

HessianReport hessian_identity_check(const KelvinFrame& frame, const MultiPoly& v,
                                     const std::vector<Vec>& samples, double fd_step) {
  if (v.n_vars() != frame.n) throw DimensionError("field and frame dimensions differ");
  PolyJet jet(v);
  ScalarField field = [&](const Vec& y) { return jet.value(y); };
  ScalarField u = [&](const Vec& x) { return u_from_v(frame, field, x); };
  const Mat a = frame.a_matrix();
  HessianReport report;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const Vec& x = samples[s];
    Vec y = kelvin_map(x, frame.r_diag, KelvinDirection::Forward);
    MNKL m = matrices_MNKL(jet.at(y), frame);
    Mat exact = a + std::pow(y.norm(), frame.n) * m.N;
    Mat fd = finite_difference_hessian(u, x, fd_step);
    const double abs_err = (fd - exact).cwiseAbs().maxCoeff();
    const double scale = exact.cwiseAbs().maxCoeff();
    const double rel_err = scale > 0 ? abs_err / scale : abs_err;
    report.max_abs_error = std::max(report.max_abs_error, abs_err);
    if (report.worst_sample < 0 || rel_err > report.max_rel_error) {
      report.max_rel_error = rel_err;
      report.worst_sample = static_cast<int>(s);
    }
    ++report.samples;
  }
  return report;
}

}  // namespace kelvinasym
