#ifndef KELVINASYM_BRANCH_HPP
#define KELVINASYM_BRANCH_HPP

#include <span>
#include <string>

namespace kelvinasym {

enum class BranchKind { LOG, RECIP, ATAN2, SLAG };

std::string branch_name(BranchKind kind);
BranchKind parse_branch_kind(const std::string& name);  // case-insensitive

// tau-branch of the operator family with a = cot(tau), b = sqrt|cot^2(tau) - 1|.
struct PhaseBranch {
  BranchKind kind = BranchKind::SLAG;
  double tau = 0.0;
  double a = 0.0;
  double b = 1.0;
  double theta = 0.0;

  static PhaseBranch slag(double theta);
  static PhaseBranch recip(double theta);
  // Kind follows from tau: (0, pi/4) LOG, pi/4 RECIP, (pi/4, pi/2) ATAN2, pi/2 SLAG.
  static PhaseBranch from_tau(double tau, double theta);
  static PhaseBranch make(BranchKind kind, double tau, double theta);

  void validate() const;

  // Scalar eigenvalue map g with F(H) = sum_j g(lambda_j).
  double g(double lambda) const;
  // Unique admissible lambda with g(lambda) = value; DomainError otherwise.
  double g_inverse(double value) const;
  bool admissible(double lambda) const;
  // Lower bound of the admissible eigenvalue range (-inf for SLAG).
  double admissible_lower_bound() const;
  double operator_value(std::span<const double> eigenvalues) const;
};

}  // namespace kelvinasym

#endif
