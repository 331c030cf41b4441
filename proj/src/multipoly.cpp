#include "kelvinasym/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kelvinasym/errors.hpp"

namespace kelvinasym {

namespace {

int partial_degree(const Exponent& e, int first, int count) {
  int d = 0;
  for (int i = first; i < first + count; ++i) d += e[i];
  return d;
}

void accumulate(MultiPoly::TermMap& terms, const Exponent& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

}  // namespace

MultiPoly::MultiPoly(int n_vars) : n_vars_(n_vars) {
  if (n_vars < 0) throw DimensionError("negative variable count");
}

MultiPoly MultiPoly::constant(int n_vars, const Rational& c) {
  MultiPoly p(n_vars);
  p.add_term(Exponent(n_vars, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(int n_vars, int index) {
  if (index < 0 || index >= n_vars) throw IndexError("variable index out of range");
  Exponent e(n_vars, 0);
  e[index] = 1;
  return monomial(e, Rational(1));
}

MultiPoly MultiPoly::monomial(const Exponent& e, const Rational& c) {
  for (int x : e)
    if (x < 0) throw ValueError("negative exponent");
  MultiPoly p(static_cast<int>(e.size()));
  p.add_term(e, c);
  return p;
}

MultiPoly MultiPoly::r_squared(int n_vars, int dim) {
  if (dim > n_vars) throw DimensionError("dim exceeds variable count");
  MultiPoly p(n_vars);
  for (int i = 0; i < dim; ++i) {
    Exponent e(n_vars, 0);
    e[i] = 2;
    p.add_term(e, Rational(1));
  }
  return p;
}

int MultiPoly::degree(int first, int count) const {
  if (count < 0) count = n_vars_ - first;
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, partial_degree(e, first, count));
  return d;
}

Rational MultiPoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational MultiPoly::constant_term() const { return coefficient(Exponent(n_vars_, 0)); }

void MultiPoly::add_term(const Exponent& e, const Rational& c) {
  if (static_cast<int>(e.size()) != n_vars_)
    throw DimensionError("exponent length " + std::to_string(e.size()) + " != n_vars " +
                         std::to_string(n_vars_));
  accumulate(terms_, e, c);
}

MultiPoly MultiPoly::homogeneous_part(int m, int dim) const {
  MultiPoly out(n_vars_);
  for (const auto& [e, c] : terms_)
    if (partial_degree(e, 0, dim) == m) out.terms_.emplace_hint(out.terms_.end(), e, c);
  return out;
}

std::map<int, MultiPoly> MultiPoly::homogeneous_components(int dim) const {
  std::map<int, MultiPoly> out;
  for (const auto& [e, c] : terms_) {
    auto [it, inserted] = out.try_emplace(partial_degree(e, 0, dim), n_vars_);
    it->second.terms_.emplace_hint(it->second.terms_.end(), e, c);
  }
  return out;
}

bool MultiPoly::is_homogeneous(int m, int dim) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [&](const auto& t) { return partial_degree(t.first, 0, dim) == m; });
}

MultiPoly MultiPoly::derivative(int var) const {
  if (var < 0 || var >= n_vars_) throw IndexError("derivative variable out of range");
  MultiPoly out(n_vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent f = e;
    f[var] -= 1;
    out.terms_.emplace(std::move(f), c * e[var]);
  }
  return out;
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
  MultiPoly out(*this);
  out *= c;
  return out;
}

MultiPoly MultiPoly::times_monomial(const Exponent& m) const {
  if (static_cast<int>(m.size()) > n_vars_) throw DimensionError("monomial too long");
  MultiPoly out(n_vars_);
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    for (std::size_t i = 0; i < m.size(); ++i) f[i] += m[i];
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

MultiPoly MultiPoly::embedded(int new_n_vars) const {
  if (new_n_vars < n_vars_) throw DimensionError("cannot shrink a polynomial ring");
  MultiPoly out(new_n_vars);
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    f.resize(new_n_vars, 0);
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

double MultiPoly::evaluate(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != n_vars_) throw DimensionError("evaluation point size");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (int i = 0; i < n_vars_; ++i)
      if (e[i] != 0) t *= std::pow(point[i], e[i]);
    sum += t;
  }
  return sum;
}

Rational MultiPoly::evaluate(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != n_vars_) throw DimensionError("evaluation point size");
  Rational sum(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < n_vars_; ++i)
      if (e[i] != 0) t *= pow(point[i], e[i]);
    sum += t;
  }
  return sum;
}

void MultiPoly::check_ring(const MultiPoly& other) const {
  if (n_vars_ != other.n_vars_)
    throw DimensionError("polynomial rings differ: " + std::to_string(n_vars_) + " vs " +
                         std::to_string(other.n_vars_));
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
  check_ring(other);
  for (const auto& [e, c] : other.terms_) accumulate(terms_, e, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
  check_ring(other);
  for (const auto& [e, c] : other.terms_) accumulate(terms_, e, -c);
  return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.check_ring(b);
  MultiPoly out(a.n_vars_);
  Exponent f(a.n_vars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.n_vars_; ++i) f[i] = ea[i] + eb[i];
      accumulate(out.terms_, f, ca * cb);
    }
  return out;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& other) { return *this = *this * other; }

MultiPoly& MultiPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, coef] : terms_) coef *= c;
  return *this;
}

MultiPoly MultiPoly::operator-() const { return scaled(Rational(-1)); }

std::string MultiPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational mag = abs(c);
    out << (c < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    bool is_const = std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
    if (mag != 1 || is_const) out << kelvinasym::to_string(mag);
    bool need_star = mag != 1;
    for (int i = 0; i < n_vars_; ++i) {
      if (e[i] == 0) continue;
      if (need_star) out << "*";
      out << (i < static_cast<int>(names.size()) ? names[i] : "y" + std::to_string(i + 1));
      if (e[i] > 1) out << "^" << e[i];
      need_star = true;
    }
    first = false;
  }
  return out.str();
}

MultiPoly poly_laplacian(const MultiPoly& p, int n) {
  if (n > p.n_vars()) throw DimensionError("Laplacian dimension exceeds variable count");
  MultiPoly out(p.n_vars());
  for (const auto& [e, c] : p.terms())
    for (int i = 0; i < n; ++i) {
      if (e[i] < 2) continue;
      Exponent f = e;
      f[i] -= 2;
      out.add_term(f, c * (e[i] * (e[i] - 1)));
    }
  return out;
}

R2Division divide_by_r2(const MultiPoly& p, int dim) {
  if (dim < 1 || dim > p.n_vars()) throw DimensionError("invalid r^2 dimension");
  MultiPoly::TermMap rem = p.terms();
  MultiPoly quotient(p.n_vars());
  // Keys with first exponent >= 2 sit at the end of the lex-ordered map, and
  // each reduction step only creates keys with a smaller first exponent.
  while (!rem.empty()) {
    auto last = std::prev(rem.end());
    if (last->first[0] < 2) break;
    Exponent q = last->first;
    Rational c = last->second;
    rem.erase(last);
    q[0] -= 2;
    quotient.add_term(q, c);
    for (int j = 1; j < dim; ++j) {
      Exponent f = q;
      f[j] += 2;
      accumulate(rem, f, -c);
    }
  }
  MultiPoly remainder(p.n_vars());
  for (auto& [e, c] : rem) remainder.add_term(e, c);
  return {std::move(quotient), std::move(remainder)};
}

HomoPoly::HomoPoly(MultiPoly base, int degree) : base_(std::move(base)), degree_(degree) {
  if (degree < 0) throw ValueError("negative degree");
  if (!base_.is_homogeneous(degree, base_.n_vars()))
    throw ValueError("polynomial is not homogeneous of degree " + std::to_string(degree));
}

std::vector<Exponent> monomials_of_degree(int n, int m) {
  std::vector<Exponent> out;
  if (n <= 0 || m < 0) return out;
  Exponent e(n, 0);
  // Enumerate compositions of m into n parts in lex order.
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n - 1) {
      e[i] = left;
      out.push_back(e);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, m);
  return out;
}

}  // namespace kelvinasym
