#include "kelvinasym/radpoly.hpp"

#include <cmath>
#include <sstream>

#include "kelvinasym/errors.hpp"

namespace kelvinasym {

RadPoly::RadPoly(int n_vars, int dim) : n_vars_(n_vars), dim_(dim) {
  if (dim < 1 || dim > n_vars) throw DimensionError("RadPoly needs 1 <= dim <= n_vars");
}

RadPoly RadPoly::from_poly(const MultiPoly& p, int dim, int k) {
  RadPoly out(p.n_vars(), dim);
  out.add_slot(k, p);
  out.canonicalize();
  return out;
}

RadPoly RadPoly::radial_power(int n_vars, int dim, int k) {
  return from_poly(MultiPoly::constant(n_vars, Rational(1)), dim, k);
}

RadPoly RadPoly::raw(int n_vars, int dim, SlotMap slots) {
  RadPoly out(n_vars, dim);
  for (auto& [k, p] : slots) out.add_slot(k, p);
  return out;
}

bool RadPoly::is_canonical() const {
  for (const auto& [k, p] : slots_) {
    if (p.is_zero()) return false;
    for (const auto& [e, c] : p.terms())
      if (e[0] >= 2) return false;
  }
  return true;
}

MultiPoly RadPoly::slot(int k) const {
  auto it = slots_.find(k);
  return it == slots_.end() ? MultiPoly(n_vars_) : it->second;
}

int RadPoly::min_slot() const {
  if (slots_.empty()) throw ValueError("zero RadPoly has no slots");
  return slots_.begin()->first;
}

int RadPoly::max_slot() const {
  if (slots_.empty()) throw ValueError("zero RadPoly has no slots");
  return slots_.rbegin()->first;
}

void RadPoly::add_slot(int k, const MultiPoly& p) {
  if (p.n_vars() != n_vars_) throw DimensionError("slot polynomial ring mismatch");
  if (p.is_zero()) return;
  auto [it, inserted] = slots_.try_emplace(k, p);
  if (!inserted) {
    it->second += p;
    if (it->second.is_zero()) slots_.erase(it);
  }
}

void RadPoly::canonicalize() {
  SlotMap pending = std::move(slots_);
  slots_.clear();
  while (!pending.empty()) {
    auto it = pending.begin();
    int k = it->first;
    MultiPoly p = std::move(it->second);
    pending.erase(it);
    if (p.is_zero()) continue;
    auto [q, r] = divide_by_r2(p, dim_);
    if (!r.is_zero()) slots_.emplace(k, std::move(r));
    if (!q.is_zero()) {
      auto [jt, inserted] = pending.try_emplace(k + 2, q);
      if (!inserted) jt->second += q;
    }
  }
}

RadPoly RadPoly::canonicalized() const {
  RadPoly out(*this);
  out.canonicalize();
  return out;
}

MultiPoly RadPoly::parity_class(int k0) const {
  MultiPoly out(n_vars_);
  const MultiPoly r2 = MultiPoly::r_squared(n_vars_, dim_);
  for (const auto& [k, p] : slots_) {
    if ((k - k0) % 2 != 0) continue;
    if (k < k0)
      throw ValueError("slot " + std::to_string(k) + " lies below the requested base " +
                       std::to_string(k0));
    MultiPoly term = p;
    for (int j = 0; j < (k - k0) / 2; ++j) term = term * r2;
    out += term;
  }
  return out;
}

RadPoly RadPoly::derivative(int var) const {
  RadPoly out(n_vars_, dim_);
  for (const auto& [k, p] : slots_) {
    out.add_slot(k, p.derivative(var));
    if (var < dim_ && k != 0) {
      Exponent e(n_vars_, 0);
      e[var] = 1;
      out.add_slot(k - 2, p.times_monomial(e) * Rational(k));
    }
  }
  out.canonicalize();
  return out;
}

RadPoly RadPoly::times_radial(int k) const {
  RadPoly out(n_vars_, dim_);
  for (const auto& [j, p] : slots_) out.slots_.emplace(j + k, p);
  return out;
}

double RadPoly::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != n_vars_) throw DimensionError("evaluation point size");
  double r2 = 0.0;
  for (int i = 0; i < dim_; ++i) r2 += point[i] * point[i];
  double r = std::sqrt(r2);
  double sum = 0.0;
  for (const auto& [k, p] : slots_) {
    if (k < 0 && r == 0.0) throw ZeroPointError("negative |y| power evaluated at y = 0");
    sum += std::pow(r, k) * p.evaluate(point);
  }
  return sum;
}

void RadPoly::check_ring(const RadPoly& other) const {
  if (n_vars_ != other.n_vars_ || dim_ != other.dim_)
    throw DimensionError("RadPoly rings differ");
}

RadPoly& RadPoly::operator+=(const RadPoly& other) {
  check_ring(other);
  for (const auto& [k, p] : other.slots_) add_slot(k, p);
  canonicalize();
  return *this;
}

RadPoly& RadPoly::operator-=(const RadPoly& other) {
  check_ring(other);
  for (const auto& [k, p] : other.slots_) add_slot(k, -p);
  canonicalize();
  return *this;
}

RadPoly& RadPoly::operator*=(const Rational& c) {
  if (c == 0) {
    slots_.clear();
    return *this;
  }
  for (auto& [k, p] : slots_) p *= c;
  return *this;
}

RadPoly RadPoly::operator-() const {
  RadPoly out(*this);
  out *= Rational(-1);
  return out;
}

RadPoly operator*(const RadPoly& a, const RadPoly& b) {
  a.check_ring(b);
  RadPoly out(a.n_vars_, a.dim_);
  for (const auto& [ka, pa] : a.slots_)
    for (const auto& [kb, pb] : b.slots_) out.add_slot(ka + kb, pa * pb);
  out.canonicalize();
  return out;
}

RadPoly operator*(const RadPoly& a, const MultiPoly& p) {
  RadPoly out(a.n_vars_, a.dim_);
  for (const auto& [k, q] : a.slots_) out.add_slot(k, q * p);
  out.canonicalize();
  return out;
}

bool operator==(const RadPoly& a, const RadPoly& b) {
  if (a.n_vars_ != b.n_vars_ || a.dim_ != b.dim_) return false;
  if (a.is_canonical() && b.is_canonical()) return a.slots_ == b.slots_;
  return a.canonicalized().slots_ == b.canonicalized().slots_;
}

std::string RadPoly::to_string(const std::vector<std::string>& names) const {
  if (slots_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, p] : slots_) {
    if (!first) out << " + ";
    out << "|y|^" << k << "*(" << p.to_string(names) << ")";
    first = false;
  }
  return out.str();
}

RadPoly radpoly_laplacian(const RadPoly& e, int n) {
  if (n != e.dim()) throw DimensionError("Laplacian dimension differs from the RadPoly dimension");
  if (n < 2) throw DimensionError("radical Laplacian needs n >= 2");
  RadPoly::SlotMap out;
  auto add = [&](int k, const MultiPoly& p) {
    if (p.is_zero()) return;
    auto [it, inserted] = out.try_emplace(k, p);
    if (!inserted) it->second += p;
  };
  for (const auto& [k, p] : e.slots()) {
    add(k, poly_laplacian(p, n));
    if (k == 0) continue;
    for (const auto& [m, pm] : p.homogeneous_components(n)) {
      // Laplacian(|y|^k p_m) = k(k+2m+n-2)|y|^{k-2} p_m + |y|^k Laplacian(p_m)
      long factor = static_cast<long>(k) * (k + 2 * m + n - 2);
      if (factor != 0) add(k - 2, pm * Rational(factor));
    }
  }
  return RadPoly::raw(e.n_vars(), e.dim(), std::move(out)).canonicalized();
}

}  // namespace kelvinasym
