#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kelvinasym/equations.hpp"
#include "kelvinasym/errors.hpp"
#include "kelvinasym/expand.hpp"
#include "kelvinasym/fit.hpp"
#include "kelvinasym/io.hpp"
#include "kelvinasym/radial.hpp"

namespace py = pybind11;
using namespace kelvinasym;

namespace {

// Rationals cross the boundary as strings; polynomials as JSON text.
Spectrum spectrum_of(const std::vector<std::string>& values) {
  std::vector<Rational> out;
  for (const auto& v : values) out.push_back(parse_rational(v));
  return Spectrum(std::move(out));
}

std::optional<BranchParams> params_of(const std::optional<std::string>& a, const std::optional<std::string>& b) {
  if (!a && !b) return std::nullopt;
  if (!a || !b) throw ArityError("give both a and b or neither");
  return BranchParams{parse_rational(*a), parse_rational(*b)};
}

MultiPoly poly_of(const std::string& text) { return poly_from_json(Json::parse(text)); }

std::string text(const Json& j) { return j.dump(); }

std::vector<Sample> samples_of(const Eigen::Ref<const Mat>& x, const Vec& u) {
  if (x.rows() != u.size()) throw DimensionError("x and u have different lengths");
  std::vector<Sample> out;
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.push_back({x.row(i).transpose(), u[i]});
  return out;
}

py::dict trajectory_dict(const Trajectory& t) {
  const auto m = static_cast<Eigen::Index>(t.states.size());
  Vec r(m), u(m), p(m), c(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& s = t.states[static_cast<std::size_t>(i)];
    r[i] = s.r;
    u[i] = s.u;
    p[i] = s.p;
    c[i] = s.conservation_residual;
  }
  py::dict d;
  d["r"] = r;
  d["u"] = u;
  d["du"] = p;
  d["conservation_residual"] = c;
  d["step"] = t.step;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact algebra and numerics for exterior solutions of special-Lagrangian-type equations";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<ValueError>(m, "ValueError", base);
  py::register_exception<DimensionError>(m, "DimensionError", base);
  py::register_exception<SolveError>(m, "SolveError", base);
  py::register_exception<IndexError>(m, "IndexError", base);
  py::register_exception<MismatchError>(m, "MismatchError", base);
  py::register_exception<ArityError>(m, "ArityError", base);
  py::register_exception<AdmissibilityError>(m, "AdmissibilityError", base);
  py::register_exception<ZeroPointError>(m, "ZeroPointError", base);
  auto domain = py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base);
  py::register_exception<ConditioningError>(m, "ConditioningError", base);
  py::register_exception<IntegrationAborted>(m, "IntegrationAborted", domain);

  // Symmetric functions.
  m.def("sigma", [](int k, const std::vector<std::string>& lam) { return to_string(sigma(k, spectrum_of(lam))); });
  m.def("sigma_hat", [](int k, int i, const std::vector<std::string>& lam) {
    return to_string(sigma_hat(k, i, spectrum_of(lam)));
  });
  m.def("sigma_bar", [](int k, const std::vector<std::string>& lam, const std::string& a, const std::string& b) {
    return to_string(sigma_bar(k, spectrum_of(lam), BranchParams{parse_rational(a), parse_rational(b)}));
  });
  m.def(
      "verify_identity",
      [](const std::string& lemma, const std::vector<std::string>& lam, std::optional<std::string> a,
         std::optional<std::string> b, std::optional<int> aux) {
        return text(report_to_json(verify_identity(parse_lemma(lemma), spectrum_of(lam), params_of(a, b), aux)));
      },
      py::arg("lemma"), py::arg("spectrum"), py::arg("a") = py::none(), py::arg("b") = py::none(),
      py::arg("aux") = py::none());

  // Exact polynomial algebra.
  m.def("radpoly_laplacian", [](const std::string& e, int n) {
    return text(radpoly_to_json(radpoly_laplacian(radpoly_from_json(Json::parse(e)), n)));
  });
  m.def("solve_radical_poisson", [](const std::string& h, int degree, int n) {
    return text(poly_to_json(solve_radical_poisson(HomoPoly(poly_of(h), degree), n).base()));
  });
  m.def("leading_correction_Q2", [](const std::string& v0, const std::vector<std::string>& lam) {
    return text(poly_to_json(leading_correction_Q2(parse_rational(v0), spectrum_of(lam)).base()));
  });
  m.def("symbolic_residual_n3", [](const std::string& p, const std::string& q, const std::vector<std::string>& lam) {
    return text(radpoly_to_json(symbolic_residual_n3(poly_of(p), poly_of(q), spectrum_of(lam))));
  });
  m.def("expand_n3", [](const std::vector<std::string>& lam, const std::string& p, int order) {
    const Spectrum s = spectrum_of(lam);
    ExpansionState st = ExpansionState::start(s, poly_of(p));
    Json corrections = Json::array();
    while (st.order < order) {
      const MultiPoly before = st.Q;
      const int degree = st.order;
      st = next_correction_n3(st);
      corrections.push_back({{"degree", degree}, {"correction", poly_to_json(st.Q - before)}});
    }
    const RadPoly residual = symbolic_residual_n3(st.P, st.Q, s);
    return text({{"order", st.order},
                 {"Q", poly_to_json(st.Q)},
                 {"corrections", corrections},
                 {"odd_class_degrees", odd_class_degrees_n3(residual)}});
  });

  // Branches and the Kelvin frame.
  py::class_<PhaseBranch>(m, "Branch")
      .def(py::init([](const std::string& kind, double theta, std::optional<double> tau) {
             const BranchKind k = parse_branch_kind(kind);
             if ((k == BranchKind::LOG || k == BranchKind::ATAN2) && !tau)
               throw ValueError(branch_name(k) + " needs tau");
             return PhaseBranch::make(k, tau.value_or(0.0), theta);
           }),
           py::arg("kind"), py::arg("theta"), py::arg("tau") = py::none())
      .def_property_readonly("kind", [](const PhaseBranch& b) { return branch_name(b.kind); })
      .def_readonly("tau", &PhaseBranch::tau)
      .def_readonly("a", &PhaseBranch::a)
      .def_readonly("b", &PhaseBranch::b)
      .def_readonly("theta", &PhaseBranch::theta)
      .def("g", &PhaseBranch::g)
      .def("g_inverse", &PhaseBranch::g_inverse)
      .def("admissible", &PhaseBranch::admissible)
      .def("__repr__", [](const PhaseBranch& b) { return "Branch(" + text(branch_to_json(b)) + ")"; });

  m.def("scaling_matrix", [](const PhaseBranch& b, const std::vector<double>& lam) { return scaling_matrix(b, lam); });
  m.def(
      "kelvin_map",
      [](const Vec& point, const Vec& r_diag, bool forward) {
        return kelvin_map(point, r_diag, forward ? KelvinDirection::Forward : KelvinDirection::Backward);
      },
      py::arg("point"), py::arg("r_diag"), py::arg("forward") = true);
  m.def("hessian_identity_check",
        [](const PhaseBranch& b, const std::vector<double>& lam, const std::string& v,
           const Eigen::Ref<const Mat>& points, double step) {
          const KelvinFrame frame = KelvinFrame::make(b, lam);
          std::vector<Vec> samples;
          for (Eigen::Index i = 0; i < points.rows(); ++i) samples.push_back(points.row(i).transpose());
          const HessianReport r = hessian_identity_check(frame, poly_of(v), samples, step);
          py::dict d;
          d["samples"] = r.samples;
          d["max_abs_error"] = r.max_abs_error;
          d["max_rel_error"] = r.max_rel_error;
          return d;
        });
  m.def("linear_part_factor", [](const PhaseBranch& b, const std::vector<double>& lam) {
    return linear_part_factor(b, lam);
  });
  m.def("transformed_residual",
        [](const PhaseBranch& b, const std::vector<double>& lam, const std::string& v, const Vec& y) {
          const KelvinFrame frame = KelvinFrame::make(b, lam);
          const ResidualBreakdown r = transformed_residual(PolyJet(poly_of(v)).at(y), frame);
          py::dict d;
          d["laplace_term"] = r.laplace_term;
          d["nonlinear_term"] = r.nonlinear_term;
          d["total"] = r.total;
          d["linear_factor"] = r.linear_factor;
          return d;
        });

  // Radial solutions and fitting.
  m.def("radial_rhs", &radial_rhs);
  m.def("quadratic_fixed_point", &quadratic_fixed_point);
  m.def("integrate_exterior", [](const PhaseBranch& b, int n, double theta, double u1, double p1, double r_max,
                                 double step) { return trajectory_dict(integrate_exterior(b, n, theta, u1, p1, r_max, step)); });
  m.def(
      "fit_expansion",
      [](const Eigen::Ref<const Mat>& x, const Vec& u, const PhaseBranch& b,
         std::optional<std::vector<std::pair<double, double>>> annuli, int auto_annuli, bool remainder_basis) {
        const std::vector<Sample> samples = samples_of(x, u);
        FitOptions o;
        if (annuli)
          for (const auto& [lo, hi] : *annuli) o.annuli.push_back({lo, hi});
        o.auto_annuli = auto_annuli;
        o.remainder_basis = remainder_basis;
        return text(fit_to_json(fit_expansion(samples, static_cast<int>(x.cols()), b, o)));
      },
      py::arg("x"), py::arg("u"), py::arg("branch"), py::arg("annuli") = py::none(), py::arg("auto_annuli") = 6,
      py::arg("remainder_basis") = true);
}
