#ifndef KELVINASYM_FIT_HPP
#define KELVINASYM_FIT_HPP

#include <optional>
#include <vector>

#include "kelvinasym/kelvin.hpp"

namespace kelvinasym {

struct Sample {
  Vec x;
  double u = 0.0;
};

struct Annulus {
  double r_min = 0.0;
  double r_max = 0.0;
};

struct FitOptions {
  // Disjoint annuli, any order. Empty: split the sample radii into
  // `auto_annuli` geometric shells.
  std::vector<Annulus> annuli;
  int auto_annuli = 6;
  // n >= 3: refit over all annuli with |R x|^{2-n} added to the basis, so the
  // constant term is not biased by the remainder's mean. n = 2 always adds
  // the y-linear remainder terms.
  bool remainder_basis = true;
};

struct AnnulusStat {
  Annulus bounds;
  int count = 0;
  double radius = 0.0;  // geometric mean of the sample radii
  double median_abs_remainder = 0.0;
};

struct ExpansionFit {
  int n = 0;
  Mat A;
  Vec b;
  double c = 0.0;
  std::optional<double> d;  // n = 2 only
  double decay_slope = 0.0;
  double decay_slope_stderr = 0.0;
  bool remainder_detected = false;
  std::vector<Annulus> annuli;  // outermost last
  std::vector<AnnulusStat> stats;
  double rms_outer = 0.0;            // final model on the outer annulus
  double rms_outer_quadratic = 0.0;    // quadratic basis on the outer annulus only
  double rms_outer_without_log = 0.0;  // n = 2: final basis minus the log term
  double remainder_coefficient = 0.0;  // coefficient of |R x|^{2-n}, n >= 3
  Vec remainder_linear;                // n = 2: coefficients of y_i = (R x)_i / |R x|^2

  // 1/2 x^T A x + b.x + c, plus 1/2 d log(x^T (I + A^2) x) when n = 2.
  double expansion(const Vec& x) const;
};

// A = Q diag(eigenvalues) Q^T with ascending eigenvalues.
struct Diagonalization {
  Vec eigenvalues;
  Mat rotation;
};
Diagonalization diagonalize(const Mat& a);

// Full (rotated) branch scaling matrix of a symmetric A.
Mat scaling_matrix_full(const PhaseBranch& branch, const Mat& a);

ExpansionFit fit_expansion(const std::vector<Sample>& samples, int n, const PhaseBranch& branch,
                           const FitOptions& options = {});

struct RecoveredV {
  std::vector<Vec> y;
  std::vector<double> v;
  double v0_estimate = 0.0;
  std::vector<double> decile_means;  // by increasing |y|
};

// v(y) = (u - expansion(x)) |y|^{2-n} at y = kelvin_map(x).
RecoveredV recover_v(const std::vector<Sample>& samples, const ExpansionFit& fit,
                     const KelvinFrame& frame);

}  // namespace kelvinasym

#endif
