#include "kelvinasym/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "kelvinasym/errors.hpp"

namespace kelvinasym {

namespace {

constexpr double kMaxCondition = 1e12;

std::string num(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

int quadratic_count(int n) { return n * (n + 1) / 2 + n + 1; }

// Quadratic monomials z_i z_j (i <= j), then z_i, then 1.
void quadratic_row(const Vec& z, double* row) {
  const int n = static_cast<int>(z.size());
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) row[k++] = z[i] * z[j];
  for (int i = 0; i < n; ++i) row[k++] = z[i];
  row[k] = 1.0;
}

struct Coefficients {
  Mat A;
  Vec b;
  double c = 0.0;
  std::vector<double> extra;
};

// Least squares in z = x / scale; converts back to x coordinates.
using Basis = std::vector<std::function<double(const Vec&)>>;

Coefficients solve_basis(const std::vector<const Sample*>& pts, int n, double scale,
                         const Basis& extra = {}) {
  const int q = quadratic_count(n);
  const int cols = q + static_cast<int>(extra.size());
  Mat B(pts.size(), cols);
  Vec rhs(pts.size());
  for (std::size_t s = 0; s < pts.size(); ++s) {
    const Vec z = pts[s]->x / scale;
    std::vector<double> row(cols);
    quadratic_row(z, row.data());
    for (std::size_t e = 0; e < extra.size(); ++e) row[q + e] = extra[e](pts[s]->x);
    for (int k = 0; k < cols; ++k) B(s, k) = row[k];
    rhs[s] = pts[s]->u;
  }
  Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1], smax = sv[0];
  if (!(smin > 0) || (smax / smin) * (smax / smin) > kMaxCondition)
    throw ConditioningError("normal matrix condition " +
                            (smin > 0 ? num((smax / smin) * (smax / smin)) : std::string("inf")) +
                            " exceeds 1e12");
  const Vec coef = svd.solve(rhs);
  Coefficients out;
  out.A = Mat::Zero(n, n);
  out.b = Vec::Zero(n);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double a = coef[k++] / (scale * scale);
      if (i == j) {
        out.A(i, i) = 2 * a;
      } else {
        out.A(i, j) = a;
        out.A(j, i) = a;
      }
    }
  for (int i = 0; i < n; ++i) out.b[i] = coef[k++] / scale;
  out.c = coef[k];
  for (std::size_t e = 0; e < extra.size(); ++e) out.extra.push_back(coef[q + e]);
  return out;
}

double quadratic_value(const Coefficients& c, const Vec& x) {
  return 0.5 * x.dot(c.A * x) + c.b.dot(x) + c.c;
}

double rms(const std::vector<const Sample*>& pts, const std::function<double(const Vec&)>& model) {
  double s = 0.0;
  for (const auto* p : pts) {
    const double e = p->u - model(p->x);
    s += e * e;
  }
  return std::sqrt(s / pts.size());
}

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  return m;
}

std::vector<Annulus> automatic_annuli(const std::vector<Sample>& samples, int count) {
  double lo = INFINITY, hi = 0.0;
  for (const auto& s : samples) {
    const double r = s.x.norm();
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (!(lo > 0) || !(hi > lo)) throw InsufficientDataError("sample radii do not span an interval");
  std::vector<Annulus> out;
  const double ratio = std::pow(hi / lo, 1.0 / count);
  for (int i = 0; i < count; ++i) {
    Annulus a{lo * std::pow(ratio, i), lo * std::pow(ratio, i + 1)};
    if (i == count - 1) a.r_max = hi;
    out.push_back(a);
  }
  return out;
}

}  // namespace

double ExpansionFit::expansion(const Vec& x) const {
  double v = 0.5 * x.dot(A * x) + b.dot(x) + c;
  if (d) {
    const Mat S = Mat::Identity(n, n) + A * A;
    v += 0.5 * *d * std::log(x.dot(S * x));
  }
  return v;
}

Diagonalization diagonalize(const Mat& a) {
  if (a.rows() != a.cols()) throw DimensionError("matrix must be square");
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.transpose()));
  return {es.eigenvalues(), es.eigenvectors()};
}

Mat scaling_matrix_full(const PhaseBranch& branch, const Mat& a) {
  const Diagonalization dz = diagonalize(a);
  std::vector<double> lambda(dz.eigenvalues.data(), dz.eigenvalues.data() + dz.eigenvalues.size());
  const Vec r = scaling_matrix(branch, lambda);
  return dz.rotation * r.asDiagonal() * dz.rotation.transpose();
}

ExpansionFit fit_expansion(const std::vector<Sample>& samples, int n, const PhaseBranch& branch,
                           const FitOptions& options) {
  if (n < 2) throw DimensionError("fitting needs n >= 2");
  branch.validate();
  for (const auto& s : samples)
    if (s.x.size() != n) throw DimensionError("sample dimension differs from n");
  if (samples.empty()) throw InsufficientDataError("no samples");

  std::vector<Annulus> annuli = options.annuli;
  if (annuli.empty()) {
    if (options.auto_annuli < 3) throw ValueError("need at least 3 automatic annuli");
    annuli = automatic_annuli(samples, options.auto_annuli);
  }
  std::sort(annuli.begin(), annuli.end(),
            [](const Annulus& x, const Annulus& y) { return x.r_min < y.r_min; });
  for (std::size_t i = 0; i < annuli.size(); ++i) {
    if (!(annuli[i].r_min >= 0) || !(annuli[i].r_max > annuli[i].r_min))
      throw ValueError("annulus bounds must satisfy 0 <= r_min < r_max");
    if (i > 0 && annuli[i].r_min < annuli[i - 1].r_max) throw ValueError("annuli overlap");
  }

  std::vector<std::vector<const Sample*>> groups(annuli.size());
  for (const auto& s : samples) {
    const double r = s.x.norm();
    for (std::size_t i = 0; i < annuli.size(); ++i) {
      const bool last = i + 1 == annuli.size();
      if (r >= annuli[i].r_min && (r < annuli[i].r_max || (last && r <= annuli[i].r_max))) {
        groups[i].push_back(&s);
        break;
      }
    }
  }
  std::vector<Annulus> used;
  std::vector<std::vector<const Sample*>> used_groups;
  for (std::size_t i = 0; i < annuli.size(); ++i)
    if (!groups[i].empty()) {
      used.push_back(annuli[i]);
      used_groups.push_back(std::move(groups[i]));
    }
  if (used.size() < 3)
    throw InsufficientDataError("need samples in at least 3 annuli, got " +
                                std::to_string(used.size()));
  const auto& outer = used_groups.back();
  const int params = quadratic_count(n) + 1;
  if (static_cast<int>(outer.size()) < 4 * params)
    throw InsufficientDataError("outer annulus has " + std::to_string(outer.size()) +
                                " samples, need at least " + std::to_string(4 * params));

  const double scale = used.back().r_max;
  ExpansionFit fit;
  fit.n = n;
  fit.annuli = used;
  std::vector<const Sample*> all;
  for (const auto& g : used_groups) all.insert(all.end(), g.begin(), g.end());

  const Coefficients pass1 = solve_basis(outer, n, scale);
  fit.rms_outer_quadratic = rms(outer, [&](const Vec& x) { return quadratic_value(pass1, x); });

  Coefficients final = pass1;
  Basis remainder_terms;  // leading remainder, modelled but not part of the expansion
  std::size_t remainder_count = 0;

  if (n == 2) {
    Mat a = pass1.A;
    auto log_basis = [scale](const Mat& S) {
      return [S, scale](const Vec& x) { return std::log(x.dot(S * x) / (scale * scale)); };
    };
    for (int it = 0; it < 2; ++it) {
      final = solve_basis(outer, n, scale, {log_basis(Mat::Identity(2, 2) + a * a)});
      a = final.A;
    }
    // The remainder starts with grad v(0) . y, y = R x / |R x|^2; fitting it
    // over all annuli keeps it out of b and c.
    const Mat R = scaling_matrix_full(branch, a);
    for (int i = 0; i < n; ++i)
      remainder_terms.push_back([R, i, scale](const Vec& x) {
        const Vec rx = R * x;
        return scale * rx[i] / rx.squaredNorm();
      });
    remainder_count = remainder_terms.size();
    const Coefficients no_log = solve_basis(all, n, scale, remainder_terms);
    Basis with_log = remainder_terms;
    with_log.push_back(log_basis(Mat::Identity(2, 2) + a * a));
    final = solve_basis(all, n, scale, with_log);
    fit.rms_outer_without_log = rms(outer, [&](const Vec& x) {
      double v = quadratic_value(no_log, x);
      for (std::size_t e = 0; e < remainder_count; ++e) v += no_log.extra[e] * remainder_terms[e](x);
      return v;
    });
    // Basis used log(x^T S x / scale^2) = log(x^T S x) - 2 log(scale).
    const double delta = final.extra[n];
    final.c -= 2.0 * delta * std::log(scale);
    fit.d = 2.0 * delta;
    fit.remainder_linear = Vec(n);
    for (int i = 0; i < n; ++i) fit.remainder_linear[i] = final.extra[i] * scale;
  } else if (options.remainder_basis) {
    const Mat R = scaling_matrix_full(branch, pass1.A);
    const double power = 2.0 - n;
    remainder_terms.push_back([R, power, scale](const Vec& x) {
      return std::pow((R * x).norm() / scale, power);
    });
    remainder_count = 1;
    final = solve_basis(all, n, scale, remainder_terms);
    fit.remainder_coefficient = final.extra[0] * std::pow(scale, n - 2);
  }

  fit.A = final.A;
  fit.b = final.b;
  fit.c = final.c;
  const std::function<double(const Vec&)> expansion_part = [&fit](const Vec& x) {
    return fit.expansion(x);
  };
  fit.rms_outer = rms(outer, [&](const Vec& x) {
    double v = fit.expansion(x);
    for (std::size_t e = 0; e < remainder_count; ++e) v += final.extra[e] * remainder_terms[e](x);
    return v;
  });
  if (n != 2) fit.rms_outer_without_log = fit.rms_outer;

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < used.size(); ++i) {
    AnnulusStat st;
    st.bounds = used[i];
    st.count = static_cast<int>(used_groups[i].size());
    std::vector<double> rem;
    double log_r = 0.0;
    for (const auto* p : used_groups[i]) {
      rem.push_back(std::abs(p->u - expansion_part(p->x)));
      log_r += std::log(p->x.norm());
    }
    st.radius = std::exp(log_r / st.count);
    st.median_abs_remainder = median(rem);
    fit.stats.push_back(st);
    if (st.median_abs_remainder > 0 && std::isfinite(std::log(st.radius))) {
      lx.push_back(std::log(st.radius));
      ly.push_back(std::log(st.median_abs_remainder));
    }
  }
  if (lx.size() >= 3) {
    const double k = static_cast<double>(lx.size());
    const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / k;
    const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx, intercept = my - slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      const double e = ly[i] - intercept - slope * lx[i];
      ssr += e * e;
    }
    fit.decay_slope = slope;
    fit.decay_slope_stderr = std::sqrt(ssr / (k - 2) / sxx);
    fit.remainder_detected = true;
  }
  return fit;
}

RecoveredV recover_v(const std::vector<Sample>& samples, const ExpansionFit& fit,
                     const KelvinFrame& frame) {
  frame.validate();
  if (frame.n != fit.n) throw DimensionError("frame and fit dimensions differ");
  if (samples.empty()) throw InsufficientDataError("no samples");
  RecoveredV out;
  for (const auto& s : samples) {
    if (s.x.size() != fit.n) throw DimensionError("sample dimension differs from n");
    Vec y = kelvin_map(s.x, frame.r_diag, KelvinDirection::Forward);
    out.v.push_back((s.u - fit.expansion(s.x)) * std::pow(y.norm(), 2 - fit.n));
    out.y.push_back(std::move(y));
  }
  std::vector<std::size_t> order(out.y.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return out.y[i].norm() < out.y[j].norm();
  });
  const std::size_t total = order.size();
  for (int d = 0; d < 10; ++d) {
    const std::size_t lo = total * d / 10, hi = total * (d + 1) / 10;
    if (hi <= lo) continue;
    double sum = 0.0;
    for (std::size_t k = lo; k < hi; ++k) sum += out.v[order[k]];
    out.decile_means.push_back(sum / (hi - lo));
  }
  const std::size_t first = std::max<std::size_t>(1, total / 10);
  double sum = 0.0;
  for (std::size_t k = 0; k < first; ++k) sum += out.v[order[k]];
  out.v0_estimate = sum / first;
  return out;
}

}  // namespace kelvinasym
