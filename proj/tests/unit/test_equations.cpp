#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kelvinasym/equations.hpp"
#include "kelvinasym/errors.hpp"
#include "kelvinasym/expand.hpp"
#include "kelvinasym/random.hpp"
#include "oracles.hpp"

using namespace kelvinasym;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<PhaseBranch> all_branches() {
  return {PhaseBranch::slag(0), PhaseBranch::recip(0), PhaseBranch::from_tau(1.15, 0),
          PhaseBranch::from_tau(0.55, 0)};
}

double random_admissible(const PhaseBranch& br, Rng& rng) {
  const double lo = br.admissible_lower_bound();
  return (std::isfinite(lo) ? lo : -3.0) + uniform(rng, 0.3, 3.0);
}

Mat random_rotation(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  return Eigen::HouseholderQR<Mat>(g).householderQ();
}

Mat with_eigenvalues(const std::vector<double>& eig, Rng& rng) {
  const int n = static_cast<int>(eig.size());
  const Mat q = random_rotation(n, rng);
  return q * Eigen::Map<const Vec>(eig.data(), n).asDiagonal() * q.transpose();
}

// Coefficients of t -> f(t) of degree <= d, by interpolation at t = 0..d.
std::vector<double> interpolate(const std::function<double(double)>& f, int d) {
  Mat v(d + 1, d + 1);
  Vec values(d + 1);
  for (int k = 0; k <= d; ++k) {
    for (int p = 0; p <= d; ++p) v(k, p) = std::pow(static_cast<double>(k), p);
    values[k] = f(k);
  }
  const Vec c = v.fullPivLu().solve(values);
  return {c.data(), c.data() + c.size()};
}

Jet2 numeric_jet(const SymbolicJet& sj, const Vec& y) {
  const std::vector<double> p(y.data(), y.data() + y.size());
  Jet2 jet;
  const int n = sj.n;
  jet.y = y;
  jet.v = sj.v.evaluate(p);
  jet.grad = Vec(n);
  jet.hess = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    jet.grad[i] = sj.grad[i].evaluate(p);
    for (int j = 0; j < n; ++j) jet.hess(i, j) = sj.hess[i][j].evaluate(p);
  }
  return jet;
}

Vec random_direction(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  Vec d(n);
  for (int i = 0; i < n; ++i) d[i] = normal(rng);
  return d.normalized();
}

}  // namespace

TEST_CASE("algebraic_residual examples") {
  CHECK(std::abs(algebraic_residual(PhaseBranch::slag(0), Mat::Identity(3, 3), 3 * kPi / 4)) < 1e-14);
  CHECK(std::abs(algebraic_residual(PhaseBranch::recip(0), Mat::Zero(3, 3), -3 * std::sqrt(2.0))) <
        1e-14);

  // u = (x1^2 + x2^2 - 1) e^{-x3} + e^{x3} / 4 solves the theta = pi/2 equation.
  Rng rng = trial_rng(41, 0);
  for (int i = 0; i < 20; ++i) {
    const double x1 = uniform(rng, -2, 2), x2 = uniform(rng, -2, 2), x3 = uniform(rng, -2, 2);
    const double em = std::exp(-x3), ep = std::exp(x3);
    Mat h(3, 3);
    h << 2 * em, 0, -2 * x1 * em, 0, 2 * em, -2 * x2 * em, -2 * x1 * em, -2 * x2 * em,
        (x1 * x1 + x2 * x2 - 1) * em + ep / 4;
    CHECK(std::abs(algebraic_residual(PhaseBranch::slag(0), h, kPi / 2)) < 1e-8);
  }
}

TEST_CASE("algebraic forms vanish at theta = F(H) for every branch") {
  Rng rng = trial_rng(42, 0);
  for (const auto& br : all_branches())
    for (int n : {2, 3, 4, 5}) {
      double worst = 0.0;
      for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> eig(n);
        for (auto& e : eig) e = random_admissible(br, rng);
        const Mat h = with_eigenvalues(eig, rng);
        const double theta = br.operator_value(eig);
        const std::vector<double> s = sigma_numeric(h);
        double scale = 0.0;
        for (double x : s) scale = std::max(scale, std::abs(x));
        worst = std::max(worst, std::abs(algebraic_residual(br, h, theta)) / std::max(1.0, scale));
        CHECK(std::abs(algebraic_residual(br, h, theta + 0.3)) / std::max(1.0, scale) > 1e-6);
      }
      CHECK(worst < 1e-9);
    }
}

TEST_CASE("theta elimination: equal phases give a vanishing theta-free residual") {
  Rng rng = trial_rng(43, 0);
  for (const auto& br : all_branches())
    for (int n : {3, 4}) {
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> s(n), eig(n);
        for (auto& x : s) x = random_admissible(br, rng);
        const double theta = br.operator_value(s);
        // eigenvalues of H: perturb all but the last, then solve for the last.
        double rest = theta;
        for (int i = 0; i + 1 < n; ++i) {
          eig[i] = s[i] + uniform(rng, -0.1, 0.1);
          if (!br.admissible(eig[i])) eig[i] = s[i];
          rest -= br.g(eig[i]);
        }
        try {
          eig[n - 1] = br.g_inverse(rest);
        } catch (const DomainError&) {
          continue;
        }
        const Mat h = with_eigenvalues(eig, rng);
        const std::vector<double> sh = sigma_numeric(h);
        double scale = 1.0;
        for (double x : sh) scale = std::max(scale, std::abs(x));
        for (double x : sigma_numeric(std::span<const double>(s))) scale = std::max(scale, std::abs(x));
        CHECK(std::abs(notheta_residual(br, s, h)) / (scale * scale) < 1e-9);
      }
    }
}

TEST_CASE("notheta_residual examples") {
  Rng rng = trial_rng(44, 0);
  for (const auto& br : all_branches()) {
    std::vector<double> s(3);
    for (auto& x : s) x = random_admissible(br, rng);
    const Mat a = Eigen::Map<const Vec>(s.data(), 3).asDiagonal();
    CHECK(notheta_residual(br, s, a) == 0.0);
  }
  Mat e11 = Mat::Zero(3, 3);
  e11(0, 0) = 1;
  const std::vector<double> s = {1, 2, 3};
  const Mat a = Eigen::Map<const Vec>(s.data(), 3).asDiagonal();
  const auto slag = interpolate(
      [&](double t) { return notheta_residual(PhaseBranch::slag(0), s, a + t * e11); }, 3);
  CHECK(slag[1] == doctest::Approx(50.0).epsilon(1e-10));
  const std::vector<double> zero = {0, 0, 0};
  const auto recip = interpolate(
      [&](double t) { return notheta_residual(PhaseBranch::recip(0), zero, t * e11); }, 3);
  CHECK(recip[1] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK_THROWS_AS(notheta_residual(PhaseBranch::slag(0), s, Mat::Zero(2, 2)), DimensionError);
}

TEST_CASE("notheta_expansion reproduces the residual as a polynomial in eps") {
  Rng rng = trial_rng(45, 0);
  for (const auto& br : all_branches())
    for (int n : {2, 3, 4, 5}) {
      std::vector<double> s(n);
      for (auto& x : s) x = random_admissible(br, rng);
      Mat nm(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) nm(i, j) = nm(j, i) = uniform(rng, -1, 1);
      const auto c = notheta_expansion(br, s, nm);
      CHECK(c.size() == static_cast<std::size_t>(n + 1));
      CHECK(c[0] == doctest::Approx(0.0));
      const Mat a = Eigen::Map<const Vec>(s.data(), n).asDiagonal();
      for (double eps : {0.05, 0.3, 1.1}) {
        double poly = 0.0;
        for (int j = 0; j <= n; ++j) poly += c[j] * std::pow(eps, j);
        const double direct = notheta_residual(br, s, a + eps * nm);
        CHECK(poly == doctest::Approx(direct).epsilon(1e-9).scale(1.0));
      }
    }
}

TEST_CASE("linear_part_factor examples") {
  CHECK(linear_part_factor(PhaseBranch::slag(0), std::vector<double>{1, 2, 3}) ==
        doctest::Approx(100.0));
  CHECK(linear_part_factor(PhaseBranch::slag(0), std::vector<double>{0, 0, 0, 0}) ==
        doctest::Approx(1.0));
  // -sqrt(2) prod(1+lambda)^2 per unit of N_ii / R_ii^2 = 2^{-1/2}(1+lambda_i)^2
  // leaves -2^{-1/2} at A = 0.
  CHECK(linear_part_factor(PhaseBranch::recip(0), std::vector<double>{0, 0, 0}) ==
        doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK_THROWS_AS(linear_part_factor(PhaseBranch::recip(0), std::vector<double>{-1.5, 0, 0}),
                  AdmissibilityError);
}

TEST_CASE("linear factors carry (a^2 + 1)^{-1/2} for the arctan-ratio and log branches") {
  Rng rng = trial_rng(46, 0);
  for (int n : {2, 3, 4}) {
    const PhaseBranch at = PhaseBranch::from_tau(1.05, 0), lg = PhaseBranch::from_tau(0.6, 0);
    std::vector<double> sa(n), sl(n);
    for (auto& x : sa) x = random_admissible(at, rng);
    for (auto& x : sl) x = random_admissible(lg, rng);
    double pa = 1.0, pl = 1.0;
    for (double l : sa) pa *= (l + at.a) * (l + at.a) + at.b * at.b;
    for (double l : sl) pl *= (l + lg.a) * (l + lg.a) - lg.b * lg.b;
    CHECK(linear_part_factor(at, sa) ==
          doctest::Approx(std::pow(2.0, n) * at.b * pa / std::sqrt(at.a * at.a + 1)).epsilon(1e-11));
    CHECK(linear_part_factor(lg, sl) ==
          doctest::Approx(2.0 * lg.b * pl / std::sqrt(lg.a * lg.a + 1)).epsilon(1e-11));
  }
}

TEST_CASE("the eps-linear part is gamma |y|^2 Laplacian v for random jets on every branch") {
  Rng rng = trial_rng(47, 0);
  for (const auto& br : all_branches())
    for (int n : {3, 4, 5}) {
      std::vector<double> s(n);
      for (auto& x : s) x = random_admissible(br, rng);
      const KelvinFrame frame = KelvinFrame::make(br, s);
      const double gamma = linear_part_factor(br, s);
      const MultiPoly v = random_poly(n, 0, 3, rng);
      const Jet2 jet = PolyJet(v).at(random_direction(n, rng) * 0.4);
      const MNKL m = matrices_MNKL(jet, frame);
      const Mat a = frame.a_matrix();
      const auto c = interpolate(
          [&](double t) { return notheta_residual(br, s, a + (t / 8) * m.N); }, n);
      const double slope = c[1] * 8;
      const double expected = gamma * jet.y.squaredNorm() * jet.hess.trace();
      CHECK(slope == doctest::Approx(expected).epsilon(1e-7).scale(std::abs(gamma)));
    }
}

TEST_CASE("symbolic N-linear part factors as prod(1 + lambda^2) |y|^{n+2} Laplacian v") {
  Rng rng = trial_rng(48, 0);
  for (int n : {3, 4}) {
    const Spectrum s = random_spectrum(n, rng);
    const auto [linear, expected] = oracle::slag_linear_part(s);
    CHECK(linear == expected);
  }
  // With (1 + lambda^3) factors in place of squares the identity fails.
  const Spectrum s({Rational(2), Rational(-1, 2), Rational(3)});
  const auto [linear, expected] = oracle::slag_linear_part(s);
  Rational cubes = 1, squares = 1;
  for (const auto& l : s.lambda) {
    cubes *= 1 + l * l * l;
    squares *= 1 + l * l;
  }
  CHECK(linear == expected);
  CHECK(!(linear == expected * (cubes / squares)));
}

TEST_CASE("transformed_residual examples") {
  const KelvinFrame flat = KelvinFrame::make(PhaseBranch::slag(0), {0, 0, 0});
  Rng rng = trial_rng(49, 0);
  const Vec y = random_direction(3, rng) * 0.37;
  const ResidualBreakdown zero =
      transformed_residual(Jet2{y, 0.0, Vec::Zero(3), Mat::Zero(3, 3)}, flat);
  CHECK(zero.total == 0.0);

  // Constant jet: M has eigenvalues (-1, -1, 2), sigma_3(M) = 2 and the cubic
  // term carries |y|^{3n - 2} / |y|^{n + 2} = |y|^4.
  const ResidualBreakdown one = transformed_residual(Jet2{y, 1.0, Vec::Zero(3), Mat::Zero(3, 3)}, flat);
  CHECK(one.laplace_term == 0.0);
  CHECK(one.total == doctest::Approx(-2.0 * std::pow(y.norm(), 4)).epsilon(1e-12));
  CHECK(one.linear_factor == doctest::Approx(1.0));
}

TEST_CASE("transformed_residual split is consistent") {
  Rng rng = trial_rng(50, 0);
  for (const auto& br : all_branches())
    for (int n : {3, 4, 5}) {
      std::vector<double> s(n);
      for (auto& x : s) x = random_admissible(br, rng);
      const KelvinFrame frame = KelvinFrame::make(br, s);
      const PolyJet pj(random_poly(n, 0, 3, rng));
      const Jet2 jet = pj.at(random_direction(n, rng) * uniform(rng, 0.1, 0.8));
      const ResidualBreakdown r = transformed_residual(jet, frame);
      CHECK(r.total == doctest::Approx(r.laplace_term + r.nonlinear_term).epsilon(1e-12));
      CHECK(r.linear_part == doctest::Approx(r.laplace_term).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("nonlinear residual decays like t^{n-2} along rays") {
  for (int n : {3, 4, 5})
    for (int seed = 0; seed < 5; ++seed) {
      Rng rng = trial_rng(51 + seed, n);
      const Spectrum s = random_spectrum(n, rng);
      const KelvinFrame frame = KelvinFrame::make(PhaseBranch::slag(0), s.to_doubles());
      const PolyJet pj(random_test_jet(n, 3, Rational(8), rng));
      const Vec dir = random_direction(n, rng);
      std::vector<double> lx, ly;
      for (int e = 3; e <= 10; ++e) {
        const double t = std::ldexp(1.0, -e);
        lx.push_back(std::log(t));
        ly.push_back(std::log(std::abs(transformed_residual(pj.at(t * dir), frame).nonlinear_term)));
      }
      CHECK(oracle::ols_slope(lx, ly) >= n - 2 - 0.1);
    }
}

TEST_CASE("nonlinear/t^{n-2} tends to the constant-jet coefficient for unscaled jets") {
  // The limit depends only on v(0); compare deep along the ray.
  for (int n : {3, 4})
    for (int seed = 0; seed < 6; ++seed) {
      Rng rng = trial_rng(60 + seed, n);
      const Spectrum s = random_spectrum(n, rng);
      const KelvinFrame frame = KelvinFrame::make(PhaseBranch::slag(0), s.to_doubles());
      MultiPoly v = random_poly(n, 1, 3, rng) + MultiPoly::constant(n, random_nonzero_rational(rng));
      const PolyJet pj(v), p0(MultiPoly::constant(n, v.constant_term()));
      const Vec dir = random_direction(n, rng);
      const double t0 = 1e-7;
      const double limit = transformed_residual(p0.at(t0 * dir), frame).nonlinear_term / std::pow(t0, n - 2);
      const double t = std::ldexp(1.0, -20);
      const double ratio = transformed_residual(pj.at(t * dir), frame).nonlinear_term / std::pow(t, n - 2);
      CHECK(ratio == doctest::Approx(limit).epsilon(1e-3));
    }
}

TEST_CASE("symbolic_residual_n3 examples") {
  const Spectrum zero({0, 0, 0});
  CHECK(symbolic_residual_n3(MultiPoly(3), MultiPoly(3), zero).is_zero());

  const Rational p0(3, 2);
  const RadPoly r = symbolic_residual_n3(MultiPoly::constant(3, p0), MultiPoly(3), zero);
  CHECK(r == RadPoly::from_poly(MultiPoly::constant(3, -2 * p0 * p0 * p0), 3, 4));
  CHECK_THROWS_AS(symbolic_residual_n3(MultiPoly(2), MultiPoly(2), Spectrum({1, 2})), DimensionError);
}

TEST_CASE("the odd slot for constant v is -p0^2 [sigma_1 |y|^2 + 3 sum lambda_i y_i^2]") {
  const Spectrum s({Rational(1), Rational(-2, 3), Rational(5, 4)});
  const Rational p0(-7, 5);
  const RadPoly r = symbolic_residual_n3(MultiPoly::constant(3, p0), MultiPoly(3), s);
  MultiPoly weighted(3);
  for (int i = 0; i < 3; ++i) {
    Exponent e(3, 0);
    e[i] = 2;
    weighted.add_term(e, s.lambda[i]);
  }
  const MultiPoly r2 = MultiPoly::r_squared(3, 3);
  const MultiPoly derived = -(p0 * p0) * (r2 * sigma(1, s) + weighted * Rational(3));
  CHECK(odd_class_n3(r) == derived);
  CHECK(!(odd_class_n3(r) == leading_source_Q2bar(p0, s).base()));

  // Finite-difference oracle: |y|^2 sum_{i<j} (lambda_i + lambda_j) minor_ij(M) with
  // M = R^{-1} (Hess u - A) R^{-1} / |y|^3, u = 1/2 x^T A x + |y| p0.
  const std::vector<double> lam = s.to_doubles();
  const KelvinFrame frame = KelvinFrame::make(PhaseBranch::slag(0), lam);
  const double v0 = to_double(p0);
  const ScalarField u = [&](const Vec& x) { return u_from_v(frame, [&](const Vec&) { return v0; }, x); };
  Rng rng = trial_rng(70, 0);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec x = random_direction(3, rng) * uniform(rng, 2.0, 3.0);
    const Vec y = kelvin_map(x, frame.r_diag, KelvinDirection::Forward);
    const double ry = y.norm();
    const Mat hess = finite_difference_hessian(u, x, 1e-3);
    const Mat rinv = frame.r_diag.cwiseInverse().asDiagonal();
    const Mat m = rinv * (hess - frame.a_matrix()) * rinv / std::pow(ry, 3);
    double quad = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        quad += (lam[i] + lam[j]) * (m(i, i) * m(j, j) - m(i, j) * m(i, j));
    quad *= ry * ry;
    const std::vector<double> yp(y.data(), y.data() + 3);
    CHECK(quad == doctest::Approx(derived.evaluate(yp)).epsilon(1e-5));
    CHECK(std::abs(quad - leading_source_Q2bar(p0, s).base().evaluate(yp)) > 1e-3);
  }
}

TEST_CASE("symbolic_residual_n3 agrees with transformed_residual") {
  Rng rng = trial_rng(71, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Spectrum s = random_spectrum(3, rng);
    const KelvinFrame frame = KelvinFrame::make(PhaseBranch::slag(0), s.to_doubles());
    const MultiPoly p = random_poly(3, 0, 2, rng, 0.7);
    const MultiPoly q = random_poly(3, 2, 3, rng, 0.5);
    const RadPoly v = RadPoly::from_poly(p, 3, 0) + RadPoly::from_poly(q, 3, 1);
    const SymbolicJet sj = jet_of(v);
    const RadPoly residual = symbolic_residual_n3(p, q, s);
    const Vec y = random_direction(3, rng) * uniform(rng, 0.2, 0.8);
    const std::vector<double> yp(y.data(), y.data() + 3);
    const double symbolic = residual.evaluate(yp);
    const double numeric = transformed_residual(numeric_jet(sj, y), frame).total;
    CHECK(symbolic == doctest::Approx(numeric).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("minimal exponent structure of the n = 3 residual") {
  Rng rng = trial_rng(72, 0);
  const Spectrum s = random_spectrum(3, rng);
  const JetLayout layout{3, 0};
  const RadPoly r = residual_n3_from_jet(indeterminate_jet(layout), s);
  CHECK(r.min_slot() == -1);
  const MultiPoly low = r.slot(-1);
  CHECK(r.is_canonical());
  // Quadratic in the jet indeterminates (variables after y).
  for (const auto& [e, c] : low.terms()) {
    int jet_degree = 0;
    for (std::size_t i = 3; i < e.size(); ++i) jet_degree += e[i];
    CHECK(jet_degree == 2);
  }
}
