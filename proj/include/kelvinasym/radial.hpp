#ifndef KELVINASYM_RADIAL_HPP
#define KELVINASYM_RADIAL_HPP

#include <vector>

#include "kelvinasym/branch.hpp"
#include "kelvinasym/errors.hpp"

namespace kelvinasym {

// u'' solving g(u'') = theta - (n-1) g(p/r).
double radial_rhs(const PhaseBranch& branch, int n, double theta, double r, double p);

// alpha with n g(alpha) = theta; u = alpha r^2 / 2 is then an exact solution.
double quadratic_fixed_point(const PhaseBranch& branch, int n, double theta);

struct RadialState {
  double r = 0.0;
  double u = 0.0;
  double p = 0.0;
  double conservation_residual = 0.0;
};

struct Trajectory {
  std::vector<RadialState> states;  // every integration node
  double step = 0.0;

  // Cubic Hermite interpolation of u between nodes.
  double u_at(double r) const;
  double p_at(double r) const;
  double max_conservation_residual() const;
  std::vector<RadialState> strided(int stride) const;
};

class IntegrationAborted : public DomainError {
 public:
  IntegrationAborted(const std::string& what, Trajectory partial, double failure_radius)
      : DomainError(what), partial_(std::move(partial)), failure_radius_(failure_radius) {}
  const Trajectory& partial() const { return partial_; }
  double failure_radius() const { return failure_radius_; }

 private:
  Trajectory partial_;
  double failure_radius_;
};

// Classical RK4 for u' = p, p' = radial_rhs from r = 1 to r_max. The
// conservation residual |g(u'') + (n-1) g(p/r) - theta| uses u'' from a
// fourth-order difference of the computed p, so it measures the defect of
// the discrete trajectory rather than of the right-hand side.
Trajectory integrate_exterior(const PhaseBranch& branch, int n, double theta, double u1, double p1,
                              double r_max, double step);

}  // namespace kelvinasym

#endif
