#include "kelvinasym/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kelvinasym/errors.hpp"

namespace kelvinasym {

namespace {

Rational rational_field(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw ParseError("expected a rational string, got " + j.dump());
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError("not a number: \"" + s + "\"");
  return v;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

Json poly_to_json(const MultiPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"coef", to_string(c)}, {"exp", e}});
  return {{"n_vars", p.n_vars()}, {"terms", terms}};
}

MultiPoly poly_from_json(const Json& j) {
  const int n = field(j, "n_vars").get<int>();
  if (n < 1) throw ParseError("n_vars must be positive");
  MultiPoly p(n);
  for (const auto& t : field(j, "terms")) {
    auto e = field(t, "exp").get<Exponent>();
    if (static_cast<int>(e.size()) != n) throw ParseError("exponent length differs from n_vars");
    for (int x : e)
      if (x < 0) throw ParseError("negative exponent");
    p.add_term(e, rational_field(field(t, "coef")));
  }
  return p;
}

Json radpoly_to_json(const RadPoly& e) {
  Json slots = Json::array();
  for (const auto& [k, p] : e.slots()) slots.push_back({{"k", k}, {"poly", poly_to_json(p)}});
  return {{"n_vars", e.n_vars()}, {"dim", e.dim()}, {"slots", slots}};
}

RadPoly radpoly_from_json(const Json& j) {
  const int n = field(j, "n_vars").get<int>();
  const int dim = j.contains("dim") ? j.at("dim").get<int>() : n;
  RadPoly out(n, dim);
  for (const auto& s : field(j, "slots")) {
    MultiPoly p = poly_from_json(field(s, "poly"));
    if (p.n_vars() != n) throw ParseError("slot polynomial ring differs from n_vars");
    out += RadPoly::from_poly(p, dim, field(s, "k").get<int>());
  }
  return out;
}

Json spectrum_to_json(const Spectrum& s) {
  Json lambda = Json::array();
  for (const auto& l : s.lambda) lambda.push_back(to_string(l));
  return {{"n", s.n()}, {"lambda", lambda}};
}

Spectrum spectrum_from_json(const Json& j) {
  std::vector<Rational> values;
  for (const auto& l : field(j, "lambda")) values.push_back(rational_field(l));
  if (j.contains("n") && j.at("n").get<int>() != static_cast<int>(values.size()))
    throw ParseError("\"n\" differs from the length of \"lambda\"");
  return Spectrum(std::move(values));
}

Json report_to_json(const ExactReport& r) {
  return {{"lemma", lemma_name(r.lemma)},
          {"lhs", to_string(r.lhs)},
          {"rhs", to_string(r.rhs)},
          {"equal", r.equal}};
}

Json branch_to_json(const PhaseBranch& b) {
  Json j = {{"kind", branch_name(b.kind)}, {"theta", b.theta}};
  if (b.kind == BranchKind::LOG || b.kind == BranchKind::ATAN2) j["tau"] = b.tau;
  return j;
}

PhaseBranch branch_from_json(const Json& j) {
  const BranchKind kind = parse_branch_kind(field(j, "kind").get<std::string>());
  const double theta = field(j, "theta").get<double>();
  double tau = 0.0;
  if (kind == BranchKind::LOG || kind == BranchKind::ATAN2) tau = field(j, "tau").get<double>();
  return PhaseBranch::make(kind, tau, theta);
}

Json frame_to_json(const KelvinFrame& f) {
  Json b = Json::array();
  for (int i = 0; i < f.n; ++i) b.push_back(f.linear[i]);
  return {{"n", f.n}, {"branch", branch_to_json(f.branch)}, {"lambda", f.lambda},
          {"b", b},   {"c", f.constant}};
}

KelvinFrame frame_from_json(const Json& j) {
  const PhaseBranch branch = branch_from_json(field(j, "branch"));
  std::vector<double> lambda;
  for (const auto& l : field(j, "lambda"))
    lambda.push_back(l.is_string() ? to_double(parse_rational(l.get<std::string>())) : l.get<double>());
  const int n = j.contains("n") ? j.at("n").get<int>() : static_cast<int>(lambda.size());
  if (n != static_cast<int>(lambda.size())) throw ParseError("\"n\" differs from the length of \"lambda\"");
  Vec b = Vec::Zero(n);
  if (j.contains("b")) {
    const auto& jb = j.at("b");
    if (static_cast<int>(jb.size()) != n) throw ParseError("\"b\" has the wrong length");
    for (int i = 0; i < n; ++i) b[i] = jb[i].get<double>();
  }
  const double c = j.contains("c") ? j.at("c").get<double>() : 0.0;
  return KelvinFrame::make(branch, std::move(lambda), b, c);
}

Json matrix_to_json(const Mat& m) {
  Json entries = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) entries.push_back(m(i, j));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Json matrix_to_json(const RationalMatrix& m) {
  Json entries = Json::array();
  for (const auto& row : m)
    for (const auto& x : row) entries.push_back(to_string(x));
  return {{"rows", m.size()}, {"cols", m.empty() ? 0 : m[0].size()}, {"entries", entries}};
}

Json fit_to_json(const ExpansionFit& f) {
  Json b = Json::array();
  for (int i = 0; i < f.b.size(); ++i) b.push_back(f.b[i]);
  Json annuli = Json::array(), stats = Json::array();
  for (const auto& a : f.annuli) annuli.push_back({a.r_min, a.r_max});
  for (const auto& s : f.stats)
    stats.push_back({{"r_min", s.bounds.r_min},
                     {"r_max", s.bounds.r_max},
                     {"count", s.count},
                     {"radius", s.radius},
                     {"median_abs_remainder", s.median_abs_remainder}});
  Json j = {{"n", f.n},
            {"A", matrix_to_json(f.A)},
            {"b", b},
            {"c", f.c},
            {"d", f.d ? Json(*f.d) : Json(nullptr)},
            {"decay_slope", f.decay_slope},
            {"decay_slope_stderr", f.decay_slope_stderr},
            {"remainder_detected", f.remainder_detected},
            {"remainder_coefficient", f.remainder_coefficient},
            {"rms_outer", f.rms_outer},
            {"rms_outer_quadratic", f.rms_outer_quadratic},
            {"rms_outer_without_log", f.d ? Json(f.rms_outer_without_log) : Json(nullptr)},
            {"annuli", annuli},
            {"annulus_stats", stats}};
  return j;
}

void write_samples_csv(std::ostream& out, const std::vector<Sample>& samples) {
  const int n = samples.empty() ? 0 : static_cast<int>(samples.front().x.size());
  for (int i = 0; i < n; ++i) out << 'x' << i + 1 << ',';
  out << "u\n";
  for (const auto& s : samples) {
    if (s.x.size() != n) throw DimensionError("samples have mixed dimensions");
    for (int i = 0; i < n; ++i) out << format_double(s.x[i]) << ',';
    out << format_double(s.u) << '\n';
  }
}

std::vector<Sample> read_samples_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty sample file");
  const auto header = split_csv(line);
  const int n = static_cast<int>(header.size()) - 1;
  if (n < 1 || header.back() != "u") throw ParseError("sample header must be x1,...,xn,u");
  for (int i = 0; i < n; ++i)
    if (header[i] != "x" + std::to_string(i + 1)) throw ParseError("sample header must be x1,...,xn,u");
  std::vector<Sample> out;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv(line);
    if (static_cast<int>(cells.size()) != n + 1)
      throw ParseError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                       " fields, expected " + std::to_string(n + 1));
    Sample s;
    s.x.resize(n);
    for (int i = 0; i < n; ++i) s.x[i] = parse_double(cells[i]);
    s.u = parse_double(cells[n]);
    out.push_back(std::move(s));
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const std::vector<RadialState>& states) {
  out << "r,u,du,conservation_residual\n";
  for (const auto& s : states)
    out << format_double(s.r) << ',' << format_double(s.u) << ',' << format_double(s.p) << ','
        << format_double(s.conservation_residual) << '\n';
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValueError("cannot write " + path);
  out << text;
  if (!out) throw ValueError("write failed for " + path);
}

}  // namespace kelvinasym
