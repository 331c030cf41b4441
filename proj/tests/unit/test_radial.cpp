#include <doctest.h>

#include <cmath>

#include "kelvinasym/errors.hpp"
#include "kelvinasym/radial.hpp"

using namespace kelvinasym;

TEST_CASE("radial_rhs examples") {
  const PhaseBranch slag = PhaseBranch::slag(3 * M_PI / 4);
  CHECK(radial_rhs(slag, 3, 3 * M_PI / 4, 1.0, 1.0) == doctest::Approx(1.0));
  const PhaseBranch flat = PhaseBranch::slag(M_PI / 2);
  // arctan(u'') = pi/2 - arctan(1).
  CHECK(radial_rhs(flat, 2, M_PI / 2, 2.0, 2.0) == doctest::Approx(1.0));
  const double recip_theta = -3 * std::sqrt(2.0);
  CHECK(std::abs(radial_rhs(PhaseBranch::recip(recip_theta), 3, recip_theta, 1.0, 0.0)) < 1e-12);
  // p/r -> infinity: tan(3 pi/4 - pi) = -1.
  CHECK(radial_rhs(slag, 3, 3 * M_PI / 4, 1.0, 1e9) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("radial_rhs domain errors") {
  const PhaseBranch slag = PhaseBranch::slag(1.0);
  CHECK_THROWS_AS(radial_rhs(slag, 3, 1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(radial_rhs(slag, 3, 1.0, -1.0, 1.0), DomainError);
  // theta - 2 arctan(w) must stay in (-pi/2, pi/2).
  CHECK_THROWS_AS(radial_rhs(PhaseBranch::slag(2.5), 3, 2.5, 1.0, 0.2), DomainError);
  const PhaseBranch log = PhaseBranch::from_tau(0.55, 0.0);
  const double below = log.admissible_lower_bound() - 0.5;
  CHECK_THROWS_AS(radial_rhs(log, 3, 0.0, 1.0, below), DomainError);
}

TEST_CASE("quadratic fixed points solve n g(alpha) = theta") {
  const std::vector<PhaseBranch> branches = {PhaseBranch::slag(3 * M_PI / 4),
                                             PhaseBranch::recip(-1.0),
                                             PhaseBranch::from_tau(1.15, 0.3),
                                             PhaseBranch::from_tau(0.55, -0.3)};
  for (const auto& b : branches)
    for (int n : {2, 3, 4}) {
      const double alpha = quadratic_fixed_point(b, n, b.theta);
      CHECK(b.admissible(alpha));
      CHECK(n * b.g(alpha) == doctest::Approx(b.theta).epsilon(1e-12));
      CHECK(radial_rhs(b, n, b.theta, 2.0, 2.0 * alpha) == doctest::Approx(alpha).epsilon(1e-10));
      const Trajectory t = integrate_exterior(b, n, b.theta, alpha / 2, alpha, 20, 1e-2);
      for (const auto& s : t.states) CHECK(std::abs(s.p - alpha * s.r) < 1e-9);
    }
  CHECK(quadratic_fixed_point(PhaseBranch::slag(3 * M_PI / 4), 3, 3 * M_PI / 4) == doctest::Approx(1.0));
}

TEST_CASE("the quadratic solution is reproduced to r = 50") {
  const double theta = 3 * M_PI / 4;
  const Trajectory t = integrate_exterior(PhaseBranch::slag(theta), 3, theta, 0.5, 1.0, 50, 1e-3);
  double worst = 0.0;
  for (const auto& s : t.states) worst = std::max(worst, std::abs(s.p - s.r));
  CHECK(worst < 1e-9);
  CHECK(t.states.back().r == doctest::Approx(50.0));
  CHECK(t.u_at(50.0) == doctest::Approx(0.5 * 50 * 50).epsilon(1e-12));
  CHECK(t.max_conservation_residual() < 1e-9);
}

TEST_CASE("conservation residual of a perturbed solution") {
  const double theta = 3 * M_PI / 4;
  const Trajectory t = integrate_exterior(PhaseBranch::slag(theta), 3, theta, 0.5, 1.1, 200, 1e-3);
  CHECK(t.max_conservation_residual() < 1e-8);
}

TEST_CASE("conservation residual converges at fourth order") {
  const double theta = 3 * M_PI / 4;
  const PhaseBranch b = PhaseBranch::slag(theta);
  const double coarse = integrate_exterior(b, 3, theta, 0.5, 1.1, 10, 0.02).max_conservation_residual();
  const double fine = integrate_exterior(b, 3, theta, 0.5, 1.1, 10, 0.01).max_conservation_residual();
  const double ratio = coarse / fine;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("perturbations decay toward the fixed point") {
  const double theta = 3 * M_PI / 4;
  const PhaseBranch b = PhaseBranch::slag(theta);
  const Trajectory t = integrate_exterior(b, 3, theta, 0.0, 1.3, 200, 1e-3);
  // p/r - alpha falls like r^{-n}.
  const double d50 = t.p_at(50) / 50 - 1.0, d200 = t.p_at(200) / 200 - 1.0;
  CHECK(std::abs(d200) < std::abs(d50));
  CHECK(std::log(std::abs(d50 / d200)) / std::log(4.0) == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("an inadmissible start aborts with the partial trajectory") {
  const PhaseBranch b = PhaseBranch::slag(2.5);
  try {
    integrate_exterior(b, 3, 2.5, 0.0, 0.2, 10, 1e-2);
    FAIL("expected IntegrationAborted");
  } catch (const IntegrationAborted& e) {
    CHECK(e.failure_radius() == 1.0);
    CHECK(e.partial().states.empty());
    CHECK(std::string(e.what()).size() > 0);
  }
  CHECK_NOTHROW(integrate_exterior(b, 3, 2.5, 0.0, 0.6, 10, 1e-2));
}

TEST_CASE("integrate_exterior argument errors") {
  const PhaseBranch b = PhaseBranch::slag(1.0);
  CHECK_THROWS_AS(integrate_exterior(b, 3, 1.0, 0, 1, 10, 0.0), ValueError);
  CHECK_THROWS_AS(integrate_exterior(b, 3, 1.0, 0, 1, 1.0, 0.1), ValueError);
  CHECK_THROWS_AS(integrate_exterior(b, 1, 1.0, 0, 1, 10, 0.1), DimensionError);
}

TEST_CASE("trajectory interpolation and striding") {
  const double theta = 3 * M_PI / 4;
  const Trajectory t = integrate_exterior(PhaseBranch::slag(theta), 3, theta, 0.5, 1.0, 3.05, 0.1);
  CHECK(t.states.size() == 21);
  // Hermite interpolation is exact for u = r^2 / 2.
  CHECK(t.u_at(1.234) == doctest::Approx(0.5 * 1.234 * 1.234).epsilon(1e-12));
  CHECK(t.p_at(2.345) == doctest::Approx(2.345).epsilon(1e-12));
  CHECK_THROWS_AS(t.u_at(0.5), DomainError);
  CHECK_THROWS_AS(t.u_at(3.5), DomainError);

  const auto every3 = t.strided(3);
  CHECK(every3.size() == 8);
  CHECK(every3.front().r == doctest::Approx(1.0));
  CHECK(every3.back().r == doctest::Approx(3.0));
  CHECK(t.strided(4).size() == 6);
  CHECK(t.strided(1).size() == t.states.size());
  CHECK_THROWS_AS(t.strided(0), ValueError);
}
