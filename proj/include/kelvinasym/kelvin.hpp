#ifndef KELVINASYM_KELVIN_HPP
#define KELVINASYM_KELVIN_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "kelvinasym/branch.hpp"
#include "kelvinasym/multipoly.hpp"

namespace kelvinasym {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Diagonal of the branch scaling matrix R; AdmissibilityError names the
// violated inequality.
Vec scaling_matrix(const PhaseBranch& branch, std::span<const double> lambda);

enum class KelvinDirection { Forward, Backward };

// Forward: y = Rx/|Rx|^2. Backward: x = R^{-1} y / |y|^2.
Vec kelvin_map(const Vec& point, const Vec& r_diag, KelvinDirection direction);

struct KelvinFrame {
  int n = 0;
  std::vector<double> lambda;  // A = diag(lambda)
  PhaseBranch branch;
  Vec r_diag;
  Vec linear;  // b
  double constant = 0.0;

  static KelvinFrame make(const PhaseBranch& branch, std::vector<double> lambda, Vec linear = {},
                          double constant = 0.0);
  void validate() const;
  Mat a_matrix() const;
};

struct Jet2 {
  Vec y;
  double v = 0.0;
  Vec grad;
  Mat hess;
  void validate() const;
};

using ScalarField = std::function<double(const Vec&)>;

// 1/2 x^T A x + b.x + c + |y|^{n-2} v(y), y = kelvin_map(x).
double u_from_v(const KelvinFrame& frame, const ScalarField& v, const Vec& x);

struct MNKL {
  Mat M;
  Mat N;
  Mat K;
  double L = 0.0;
};

// M = K + (y y^T / |y|^2) L, N = R M R.
MNKL matrices_MNKL(const Jet2& jet, const KelvinFrame& frame);

// Value, gradient and Hessian of a polynomial field, with cached derivatives.
class PolyJet {
 public:
  explicit PolyJet(const MultiPoly& v);
  Jet2 at(const Vec& y) const;
  double value(const Vec& y) const;

 private:
  int n_;
  MultiPoly v_;
  std::vector<MultiPoly> grad_;
  std::vector<std::vector<MultiPoly>> hess_;
};

struct HessianReport {
  int samples = 0;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;  // per sample: max-entry error over max-entry size
  int worst_sample = -1;
};

HessianReport hessian_identity_check(const KelvinFrame& frame, const MultiPoly& v,
                                     const std::vector<Vec>& samples, double fd_step);

// Central-difference Hessian of a scalar function.
Mat finite_difference_hessian(const ScalarField& f, const Vec& x, double step);

}  // namespace kelvinasym

#endif
