#include "kelvinasym/branch.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kelvinasym/errors.hpp"

namespace kelvinasym {

namespace {

constexpr double kQuarterPi = std::numbers::pi / 4;
constexpr double kHalfPi = std::numbers::pi / 2;

std::string num(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace

std::string branch_name(BranchKind kind) {
  switch (kind) {
    case BranchKind::LOG: return "LOG";
    case BranchKind::RECIP: return "RECIP";
    case BranchKind::ATAN2: return "ATAN2";
    case BranchKind::SLAG: return "SLAG";
  }
  return "?";
}

BranchKind parse_branch_kind(const std::string& name) {
  std::string up;
  for (char c : name) up += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "LOG") return BranchKind::LOG;
  if (up == "RECIP") return BranchKind::RECIP;
  if (up == "ATAN2") return BranchKind::ATAN2;
  if (up == "SLAG") return BranchKind::SLAG;
  throw ParseError("unknown branch '" + name + "' (expected slag, atan2, recip or log)");
}

PhaseBranch PhaseBranch::slag(double theta) { return {BranchKind::SLAG, kHalfPi, 0.0, 1.0, theta}; }

PhaseBranch PhaseBranch::recip(double theta) {
  return {BranchKind::RECIP, kQuarterPi, 1.0, 0.0, theta};
}

PhaseBranch PhaseBranch::from_tau(double tau, double theta) {
  if (std::abs(tau - kHalfPi) < 1e-15) return slag(theta);
  if (std::abs(tau - kQuarterPi) < 1e-15) return recip(theta);
  if (tau > 0 && tau < kQuarterPi) return make(BranchKind::LOG, tau, theta);
  if (tau > kQuarterPi && tau < kHalfPi) return make(BranchKind::ATAN2, tau, theta);
  throw DomainError("tau = " + num(tau) + " outside (0, pi/2]");
}

PhaseBranch PhaseBranch::make(BranchKind kind, double tau, double theta) {
  switch (kind) {
    case BranchKind::SLAG: return slag(theta);
    case BranchKind::RECIP: return recip(theta);
    default: break;
  }
  PhaseBranch p;
  p.kind = kind;
  p.tau = tau;
  p.theta = theta;
  p.a = 1.0 / std::tan(tau);
  p.b = std::sqrt(std::abs(p.a * p.a - 1.0));
  p.validate();
  return p;
}

void PhaseBranch::validate() const {
  switch (kind) {
    case BranchKind::SLAG:
      if (a != 0.0 || b != 1.0) throw ValueError("SLAG branch needs a = 0, b = 1");
      return;
    case BranchKind::RECIP:
      if (a != 1.0 || b != 0.0) throw ValueError("RECIP branch needs a = 1, b = 0");
      return;
    case BranchKind::LOG:
      if (!(tau > 0 && tau < kQuarterPi)) throw ValueError("LOG branch needs tau in (0, pi/4)");
      break;
    case BranchKind::ATAN2:
      if (!(tau > kQuarterPi && tau < kHalfPi))
        throw ValueError("ATAN2 branch needs tau in (pi/4, pi/2)");
      break;
  }
  const double ea = 1.0 / std::tan(tau);
  const double eb = std::sqrt(std::abs(ea * ea - 1.0));
  if (std::abs(ea - a) > 1e-12 || std::abs(eb - b) > 1e-12)
    throw ValueError("(a, b) inconsistent with tau");
}

double PhaseBranch::admissible_lower_bound() const {
  switch (kind) {
    case BranchKind::SLAG: return -std::numeric_limits<double>::infinity();
    case BranchKind::RECIP: return -1.0;
    case BranchKind::LOG: return -a + b;
    case BranchKind::ATAN2: return -(a + b);
  }
  return 0.0;
}

bool PhaseBranch::admissible(double lambda) const { return lambda > admissible_lower_bound(); }

double PhaseBranch::g(double lambda) const {
  switch (kind) {
    case BranchKind::SLAG: return std::atan(lambda);
    case BranchKind::RECIP: return -std::sqrt(2.0) / (1.0 + lambda);
    case BranchKind::ATAN2:
      return std::sqrt(a * a + 1.0) / b * std::atan((lambda + a - b) / (lambda + a + b));
    case BranchKind::LOG:
      return std::sqrt(a * a + 1.0) / (2.0 * b) * std::log((lambda + a - b) / (lambda + a + b));
  }
  return 0.0;
}

double PhaseBranch::g_inverse(double value) const {
  switch (kind) {
    case BranchKind::SLAG:
      if (!(std::abs(value) < kHalfPi))
        throw DomainError("arctan target " + num(value) + " outside (-pi/2, pi/2)");
      return std::tan(value);
    case BranchKind::RECIP: {
      // -sqrt(2)/(1 + lambda) = value needs value < 0.
      if (!(value < 0.0)) throw DomainError("reciprocal target " + num(value) + " is not negative");
      return -std::sqrt(2.0) / value - 1.0;
    }
    case BranchKind::ATAN2: {
      // Admissible lambda maps the ratio onto (-inf, 1), its arctan onto (-pi/2, pi/4).
      const double phi = value * b / std::sqrt(a * a + 1.0);
      if (!(phi > -kHalfPi && phi < kQuarterPi))
        throw DomainError("arctan-ratio target " + num(phi) + " outside (-pi/2, pi/4)");
      const double mu = std::tan(phi);
      return (a - b - mu * (a + b)) / (mu - 1.0);
    }
    case BranchKind::LOG: {
      const double ratio = std::exp(2.0 * b * value / std::sqrt(a * a + 1.0));
      if (!(ratio > 0.0 && ratio < 1.0))
        throw DomainError("log-ratio " + num(ratio) + " outside (0, 1)");
      return (a - b - ratio * (a + b)) / (ratio - 1.0);
    }
  }
  return 0.0;
}

double PhaseBranch::operator_value(std::span<const double> eigenvalues) const {
  double sum = 0.0;
  for (double l : eigenvalues) sum += g(l);
  return sum;
}

}  // namespace kelvinasym
