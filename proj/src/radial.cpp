#include "kelvinasym/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kelvinasym {

namespace {

std::string num(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

// Fourth-order first derivative of uniformly spaced samples.
std::vector<double> derivative_5pt(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> d(n, 0.0);
  if (n < 5) return d;
  const double s = 12.0 * h;
  d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / s;
  d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / s;
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / s;
  d[n - 2] = (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) / s;
  d[n - 1] = (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) / s;
  return d;
}

void fill_conservation(Trajectory& t, const PhaseBranch& branch, int n, double theta) {
  std::vector<double> p;
  p.reserve(t.states.size());
  for (const auto& s : t.states) p.push_back(s.p);
  std::vector<double> upp = derivative_5pt(p, t.step);
  for (std::size_t i = 0; i < t.states.size(); ++i) {
    auto& s = t.states[i];
    if (p.size() < 5) upp[i] = radial_rhs(branch, n, theta, s.r, s.p);
    s.conservation_residual = std::abs(branch.g(upp[i]) + (n - 1) * branch.g(s.p / s.r) - theta);
  }
}

}  // namespace

double radial_rhs(const PhaseBranch& branch, int n, double theta, double r, double p) {
  if (!(r > 0)) throw DomainError("radius must be positive, got " + num(r));
  const double w = p / r;
  if (!branch.admissible(w))
    throw DomainError("p/r = " + num(w) + " at r = " + num(r) + " is not admissible for " +
                      branch_name(branch.kind));
  return branch.g_inverse(theta - (n - 1) * branch.g(w));
}

double quadratic_fixed_point(const PhaseBranch& branch, int n, double theta) {
  return branch.g_inverse(theta / n);
}

double Trajectory::u_at(double r) const {
  if (states.size() < 2) throw InsufficientDataError("trajectory too short to interpolate");
  const double r0 = states.front().r;
  if (r < r0 - 1e-12 || r > states.back().r + 1e-12)
    throw DomainError("radius " + num(r) + " outside the trajectory");
  std::size_t i = static_cast<std::size_t>(std::floor((r - r0) / step));
  i = std::min(i, states.size() - 2);
  const RadialState &a = states[i], &b = states[i + 1];
  const double h = b.r - a.r, s = (r - a.r) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * a.u + h10 * h * a.p + h01 * b.u + h11 * h * b.p;
}

double Trajectory::p_at(double r) const {
  if (states.size() < 2) throw InsufficientDataError("trajectory too short to interpolate");
  const double r0 = states.front().r;
  std::size_t i = static_cast<std::size_t>(std::floor((r - r0) / step));
  i = std::min(i, states.size() - 2);
  const RadialState &a = states[i], &b = states[i + 1];
  const double s = (r - a.r) / (b.r - a.r);
  return (1 - s) * a.p + s * b.p;
}

double Trajectory::max_conservation_residual() const {
  double m = 0.0;
  for (const auto& s : states) m = std::max(m, s.conservation_residual);
  return m;
}

std::vector<RadialState> Trajectory::strided(int stride) const {
  if (stride < 1) throw ValueError("stride must be >= 1");
  std::vector<RadialState> out;
  for (std::size_t i = 0; i < states.size(); i += stride) out.push_back(states[i]);
  if (!states.empty() && (states.size() - 1) % stride != 0) out.push_back(states.back());
  return out;
}

Trajectory integrate_exterior(const PhaseBranch& branch, int n, double theta, double u1, double p1,
                              double r_max, double step) {
  if (!(step > 0)) throw ValueError("step must be positive");
  if (!(r_max > 1)) throw ValueError("r_max must exceed 1");
  if (n < 2) throw DimensionError("radial reduction needs n >= 2");
  Trajectory t;
  t.step = step;
  const long count = static_cast<long>(std::floor((r_max - 1.0) / step + 1e-9));
  t.states.reserve(count + 1);
  double u = u1, p = p1;
  auto f = [&](double r, double pp) { return radial_rhs(branch, n, theta, r, pp); };
  auto abort = [&](const DomainError& e, double r) {
    fill_conservation(t, branch, n, theta);
    throw IntegrationAborted(std::string(e.what()), std::move(t), r);
  };
  try {
    f(1.0, p);
  } catch (const DomainError& e) {
    abort(e, 1.0);
  }
  t.states.push_back({1.0, u, p, 0.0});
  for (long i = 0; i < count; ++i) {
    const double r = 1.0 + i * step;
    try {
      // y = (u, p), y' = (p, f(r, p))
      const double k1u = p, k1p = f(r, p);
      const double k2u = p + 0.5 * step * k1p, k2p = f(r + 0.5 * step, p + 0.5 * step * k1p);
      const double k3u = p + 0.5 * step * k2p, k3p = f(r + 0.5 * step, p + 0.5 * step * k2p);
      const double k4u = p + step * k3p, k4p = f(r + step, p + step * k3p);
      u += step / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
      p += step / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
      f(1.0 + (i + 1) * step, p);
    } catch (const DomainError& e) {
      abort(e, r);
    }
    t.states.push_back({1.0 + (i + 1) * step, u, p, 0.0});
  }
  fill_conservation(t, branch, n, theta);
  return t;
}

}  // namespace kelvinasym
