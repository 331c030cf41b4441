#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "kelvinasym/equations.hpp"
#include "kelvinasym/errors.hpp"
#include "kelvinasym/expand.hpp"
#include "kelvinasym/fit.hpp"
#include "kelvinasym/io.hpp"
#include "kelvinasym/radial.hpp"
#include "kelvinasym/random.hpp"

namespace kelvinasym::cli {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct Common {
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Seed for all randomness")->capture_default_str();
  sub->add_option("--out", c.out, "Output path (stdout when omitted)");
}

void check_output_path(const std::string& path) {
  if (path.empty()) return;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty() && !std::filesystem::is_directory(parent))
    throw UsageError("output directory does not exist: " + parent.string());
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty())
    std::cout << text;
  else
    write_text_file(c.out, text);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) {
    const auto b = part.find_first_not_of(" \t");
    const auto e = part.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : part.substr(b, e - b + 1));
  }
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& text, const std::string& what) {
  std::vector<Rational> out;
  try {
    for (const auto& p : split(text, ',')) out.push_back(parse_rational(p));
  } catch (const ParseError& e) {
    throw UsageError(what + ": " + e.what());
  }
  if (out.empty()) throw UsageError(what + " is empty");
  return out;
}

std::vector<double> to_doubles(const std::vector<Rational>& v) {
  std::vector<double> out;
  for (const auto& q : v) out.push_back(to_double(q));
  return out;
}

struct BranchArgs {
  std::string kind = "slag";
  double theta = kUnset;
  double tau = kUnset;
};

void add_branch(CLI::App* sub, BranchArgs& b, bool theta_required) {
  sub->add_option("--branch", b.kind, "slag | atan2 | recip | log")->capture_default_str();
  auto* t = sub->add_option("--theta", b.theta, "Phase");
  if (theta_required) t->required();
  sub->add_option("--tau", b.tau, "Branch angle, needed for atan2 and log");
}

PhaseBranch make_branch(const BranchArgs& b) {
  BranchKind kind;
  try {
    kind = parse_branch_kind(b.kind);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const bool needs_tau = kind == BranchKind::LOG || kind == BranchKind::ATAN2;
  if (needs_tau && std::isnan(b.tau)) throw UsageError(b.kind + " needs --tau");
  const double theta = std::isnan(b.theta) ? 0.0 : b.theta;
  try {
    return PhaseBranch::make(kind, needs_tau ? b.tau : 0.0, theta);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

// Random rational spectrum strictly inside the branch's admissible range.
Spectrum admissible_spectrum(int n, const PhaseBranch& branch, Rng& rng) {
  Spectrum s = random_spectrum(n, rng);
  const double bound = branch.admissible_lower_bound();
  if (std::isfinite(bound)) {
    const Rational base(static_cast<long>(std::floor(bound)) + 1);
    for (auto& l : s.lambda) l = base + abs(l);
  }
  return s;
}

Spectrum spectrum_option(const std::string& text, int n, const PhaseBranch& branch, Rng& rng) {
  if (text.empty()) return admissible_spectrum(n, branch, rng);
  Spectrum s(parse_rational_list(text, "--lambda"));
  if (s.n() != n)
    throw UsageError("--lambda has " + std::to_string(s.n()) + " entries, expected n = " +
                     std::to_string(n));
  return s;
}

Vec random_unit(int n, Rng& rng) {
  std::normal_distribution<double> normal;
  Vec w(n);
  do {
    for (int i = 0; i < n; ++i) w[i] = normal(rng);
  } while (w.norm() < 1e-3);
  return w.normalized();
}

int thread_count(int jobs) {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KELVINASYM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) threads = static_cast<int>(v);
  }
  return std::max(1, std::min(threads, jobs));
}

// Runs body(i) for i in [0, count) on up to KELVINASYM_THREADS workers.
void parallel_for(int count, const std::function<void(int)>& body) {
  const int threads = thread_count(count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void report_failure(const std::string& command, const Json& failure) {
  std::cerr << command << ": verification failed: " << failure.dump() << "\n";
}

// ---------------------------------------------------------------- lemmas

struct LemmasArgs {
  int n = 0;
  int trials = 50;
  int pairs = 5;
  Common common;
};

const std::vector<std::string> kLemmaChecks = {"L31", "L32", "L33", "L34"};

struct LemmaTrial {
  std::map<std::string, int> count;
  std::map<std::string, int> failures;
  std::optional<Json> first_failure;
};

LemmaTrial lemma_trial(const LemmasArgs& args, int trial) {
  LemmaTrial out;
  Rng rng = trial_rng(args.common.seed, trial);
  const int n = args.n;
  const Spectrum s = random_spectrum(n, rng);
  auto record = [&](const std::string& name, bool ok, Json detail) {
    ++out.count[name];
    if (ok) return;
    ++out.failures[name];
    if (!out.first_failure) {
      Json f = {{"check", name}, {"trial", trial}, {"spectrum", spectrum_to_json(s)}};
      for (auto& [k, v] : detail.items()) f[k] = v;
      out.first_failure = f;
    }
  };

  RationalMatrix b(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) b[i][j] = b[j][i] = random_rational(rng);
  for (int k = 1; k <= n; ++k) {
    try {
      linear_coefficient_sigma(k, s, b);
      record("L31", true, {});
    } catch (const MismatchError& e) {
      record("L31", false, {{"k", k}, {"B", matrix_to_json(b)}, {"message", e.what()}});
    }
  }
  auto check = [&](Lemma lemma, const std::optional<BranchParams>& p, int aux, const char* aux_name) {
    const ExactReport r = verify_identity(lemma, s, p, aux);
    Json detail = report_to_json(r);
    detail[aux_name] = aux;
    if (p) detail["params"] = {{"a", to_string(p->a)}, {"b", to_string(p->b)}};
    record(lemma_name(lemma), r.equal, detail);
  };
  if (n >= 3)
    for (int i = 1; i <= n; ++i) check(Lemma::L32, std::nullopt, i, "i");
  for (int q = 0; q < args.pairs; ++q) {
    const BranchParams p{random_rational(rng), random_rational(rng)};
    for (int k = 0; k <= n; ++k) check(Lemma::L33, p, k, "k");
  }
  for (int q = 0; q < args.pairs; ++q) {
    const BranchParams p{random_rational(rng), random_nonzero_rational(rng)};
    if (n >= 3)
      for (int i = 1; i <= n; ++i) check(Lemma::L34, p, i, "i");
  }
  return out;
}

int run_lemmas(const LemmasArgs& args) {
  if (args.n < 2) throw UsageError("lemmas needs n >= 2 (L31 and L33 need n >= 2, L32 and L34 n >= 3)");
  if (args.trials < 1 || args.pairs < 1) throw UsageError("--trials and --pairs must be positive");
  check_output_path(args.common.out);
  std::vector<LemmaTrial> trials(args.trials);
  parallel_for(args.trials, [&](int t) { trials[t] = lemma_trial(args, t); });

  Json checks = Json::array();
  bool all_pass = true;
  for (const auto& name : kLemmaChecks) {
    int count = 0, failures = 0;
    for (const auto& t : trials) {
      if (auto it = t.count.find(name); it != t.count.end()) count += it->second;
      if (auto it = t.failures.find(name); it != t.failures.end()) failures += it->second;
    }
    if (count == 0) continue;
    all_pass = all_pass && failures == 0;
    checks.push_back({{"name", name}, {"count", count}, {"failures", failures}});
  }
  Json first = nullptr;
  for (const auto& t : trials)
    if (t.first_failure) {
      first = *t.first_failure;
      break;
    }
  const Json report = {{"command", "lemmas"}, {"n", args.n},          {"trials", args.trials},
                       {"pairs", args.pairs},  {"seed", args.common.seed}, {"checks", checks},
                       {"all_pass", all_pass}, {"first_failure", first}};
  emit(args.common, dump(report));
  if (!all_pass) {
    report_failure("lemmas", first);
    return kExitVerification;
  }
  return kExitOk;
}

// ---------------------------------------------------------- kelvin-check

struct KelvinCheckArgs {
  int n = 3;
  BranchArgs branch;
  std::string lambda;
  std::string frame_path;
  std::string v_path;
  int degree = 3;
  int samples = 100;
  double step = 1e-4;
  double tol = 1e-5;
  double rmin = 2.0;
  double rmax = 5.0;
  Common common;
};

int run_kelvin_check(const KelvinCheckArgs& args) {
  check_output_path(args.common.out);
  if (args.samples < 1) throw UsageError("--samples must be positive");
  if (!(args.step > 0)) throw UsageError("--step must be positive");
  if (!(args.rmin > 0) || !(args.rmax > args.rmin)) throw UsageError("need 0 < --rmin < --rmax");
  Rng rng = trial_rng(args.common.seed, 0);
  KelvinFrame frame;
  if (!args.frame_path.empty()) {
    frame = frame_from_json(read_json_file(args.frame_path));
  } else {
    if (args.n < 2) throw UsageError("--n must be >= 2");
    const PhaseBranch branch = make_branch(args.branch);
    const Spectrum s = spectrum_option(args.lambda, args.n, branch, rng);
    frame = KelvinFrame::make(branch, s.to_doubles());
  }
  const MultiPoly v = args.v_path.empty() ? random_poly(frame.n, 0, args.degree, rng)
                                          : poly_from_json(read_json_file(args.v_path));
  if (v.n_vars() != frame.n) throw UsageError("v must have n variables");
  std::vector<Vec> points;
  for (int k = 0; k < args.samples; ++k)
    points.push_back(uniform(rng, args.rmin, args.rmax) * random_unit(frame.n, rng));
  const HessianReport r = hessian_identity_check(frame, v, points, args.step);
  const bool pass = r.max_rel_error < args.tol;
  Json report = {{"command", "kelvin-check"},
                 {"seed", args.common.seed},
                 {"frame", frame_to_json(frame)},
                 {"v", poly_to_json(v)},
                 {"samples", r.samples},
                 {"step", args.step},
                 {"max_abs_error", r.max_abs_error},
                 {"max_rel_error", r.max_rel_error},
                 {"tolerance", args.tol},
                 {"pass", pass}};
  if (!pass) {
    Json x = Json::array();
    for (int i = 0; i < frame.n; ++i) x.push_back(points[r.worst_sample][i]);
    report["first_failure"] = {{"check", "hessian identity"},
                               {"sample", r.worst_sample},
                               {"x", x},
                               {"max_rel_error", r.max_rel_error}};
  }
  emit(args.common, dump(report));
  if (!pass) {
    report_failure("kelvin-check", report["first_failure"]);
    return kExitVerification;
  }
  return kExitOk;
}

// --------------------------------------------------------------- poisson

struct PoissonArgs {
  int n = 3;
  std::string h_path;
  int degree = -1;
  Common common;
};

int run_poisson(const PoissonArgs& args) {
  check_output_path(args.common.out);
  if (args.n < 3) throw UsageError("poisson needs n >= 3");
  MultiPoly h;
  int m = args.degree;
  if (!args.h_path.empty()) {
    h = poly_from_json(read_json_file(args.h_path));
    if (h.n_vars() != args.n) throw UsageError("h must have n variables");
    if (h.is_zero()) {
      if (m < 0) throw UsageError("zero h needs --degree");
    } else {
      const int d = h.degree();
      if (!h.is_homogeneous(d, args.n)) throw UsageError("h is not homogeneous");
      if (m >= 0 && m != d) throw UsageError("--degree disagrees with h");
      m = d;
    }
  } else {
    if (m < 0) throw UsageError("give --source or --degree");
    Rng rng = trial_rng(args.common.seed, 0);
    h = random_homogeneous(args.n, m, rng);
  }
  const HomoPoly u = solve_radical_poisson(HomoPoly(h, m), args.n);
  const RadPoly lhs = radpoly_laplacian(RadPoly::from_poly(u.base(), args.n, args.n - 2), args.n);
  const bool exact = lhs == RadPoly::from_poly(h, args.n, args.n - 4);
  const Json report = {{"command", "poisson"},
                       {"n", args.n},
                       {"degree", m},
                       {"c_m", to_string(radical_poisson_constant(args.n, m))},
                       {"h", poly_to_json(h)},
                       {"u", poly_to_json(u.base())},
                       {"residual_zero", exact}};
  emit(args.common, dump(report));
  if (!exact) {
    report_failure("poisson", {{"check", "residual"}, {"h", poly_to_json(h)}});
    return kExitVerification;
  }
  return kExitOk;
}

// ----------------------------------------------------------- residual-n3

struct ResidualN3Args {
  std::string lambda;
  std::string p_path;
  std::string q_path;
  std::string v0;
  Common common;
};

MultiPoly p_option(const std::string& path, const std::string& v0) {
  if (!path.empty() && !v0.empty()) throw UsageError("give at most one of --P and --v0");
  if (!path.empty()) {
    MultiPoly p = poly_from_json(read_json_file(path));
    if (p.n_vars() != 3) throw UsageError("P must have 3 variables");
    return p;
  }
  return MultiPoly::constant(3, parse_rational_list(v0.empty() ? "1" : v0, "--v0").at(0));
}

int run_residual_n3(const ResidualN3Args& args) {
  check_output_path(args.common.out);
  const Spectrum s(parse_rational_list(args.lambda, "--lambda"));
  if (s.n() != 3) throw UsageError("residual-n3 needs three eigenvalues");
  const MultiPoly p = p_option(args.p_path, args.v0);
  MultiPoly q(3);
  if (!args.q_path.empty()) {
    q = poly_from_json(read_json_file(args.q_path));
    if (q.n_vars() != 3) throw UsageError("Q must have 3 variables");
  }
  const RadPoly r = symbolic_residual_n3(p, q, s);
  const Json report = {{"command", "residual-n3"},
                       {"spectrum", spectrum_to_json(s)},
                       {"P", poly_to_json(p)},
                       {"Q", poly_to_json(q)},
                       {"residual", radpoly_to_json(r)},
                       {"odd_class_degrees", odd_class_degrees_n3(r)}};
  emit(args.common, dump(report));
  return kExitOk;
}

// --------------------------------------------------------------- expand3

struct Expand3Args {
  std::string lambda;
  std::string p_path;
  std::string v0;
  int order = 5;
  bool check_q2 = false;
  Common common;
};

int run_expand3(const Expand3Args& args) {
  check_output_path(args.common.out);
  if (args.order < 2) throw UsageError("--order must be >= 2");
  Rng rng = trial_rng(args.common.seed, 0);
  const Spectrum s = args.lambda.empty() ? random_spectrum(3, rng)
                                         : Spectrum(parse_rational_list(args.lambda, "--lambda"));
  if (s.n() != 3) throw UsageError("expand3 needs three eigenvalues");
  const MultiPoly p = p_option(args.p_path, args.v0);
  ExpansionState state = ExpansionState::start(s, p);
  Json corrections = Json::array();
  MultiPoly first(3);
  while (state.order < args.order) {
    const ExpansionState next = next_correction_n3(state);
    const MultiPoly part = next.Q - state.Q;
    if (state.order == 2) first = part;
    corrections.push_back({{"degree", state.order}, {"correction", poly_to_json(part)}});
    state = next;
  }
  const RadPoly residual = symbolic_residual_n3(state.P, state.Q, s);
  const std::vector<int> degrees = odd_class_degrees_n3(residual);
  std::optional<int> violating;
  for (int d : degrees)
    if (d < args.order) {
      violating = d;
      break;
    }
  const bool audit = !violating;
  const HomoPoly q2 = leading_correction_Q2(p.constant_term(), s);
  const bool q2_equal = args.order > 2 && first == q2.base();
  Json report = {{"command", "expand3"},
                 {"spectrum", spectrum_to_json(s)},
                 {"P", poly_to_json(p)},
                 {"order", state.order},
                 {"corrections", corrections},
                 {"Q", poly_to_json(state.Q)},
                 {"odd_class_degrees", degrees},
                 {"audit_pass", audit},
                 {"leading_correction_Q2", poly_to_json(q2.base())},
                 {"first_correction_equals_Q2", q2_equal}};
  Json failure = nullptr;
  if (!audit)
    failure = {{"check", "odd class audit"}, {"degree", *violating}, {"order", args.order}};
  else if (args.check_q2 && !q2_equal)
    failure = {{"check", "first correction equals Q2"},
               {"first_correction", poly_to_json(first)},
               {"leading_correction_Q2", poly_to_json(q2.base())}};
  report["first_failure"] = failure;
  emit(args.common, dump(report));
  if (!failure.is_null()) {
    report_failure("expand3", failure);
    return kExitVerification;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- radial

struct RadialArgs {
  BranchArgs branch;
  int n = 3;
  double u1 = 0.5;
  double p1 = kUnset;
  double rmax = 50.0;
  double step = 1e-3;
  int stride = 1;
  double tol = 1e-8;
  std::string samples_out;
  int sample_count = 4000;
  double sample_rmin = 20.0;
  std::string center;
  Common common;
};

int run_radial(const RadialArgs& args) {
  check_output_path(args.common.out);
  check_output_path(args.samples_out);
  if (args.n < 2) throw UsageError("--n must be >= 2");
  if (args.stride < 1) throw UsageError("--stride must be >= 1");
  if (!(args.step > 0)) throw UsageError("--step must be positive");
  if (!(args.rmax > 1)) throw UsageError("--rmax must exceed 1");
  const PhaseBranch branch = make_branch(args.branch);
  const double p1 = std::isnan(args.p1) ? quadratic_fixed_point(branch, args.n, branch.theta) : args.p1;

  Trajectory t;
  std::optional<Json> failure;
  try {
    t = integrate_exterior(branch, args.n, branch.theta, args.u1, p1, args.rmax, args.step);
  } catch (const IntegrationAborted& e) {
    t = e.partial();
    failure = Json{{"check", "admissibility"}, {"radius", e.failure_radius()}, {"message", e.what()}};
  }
  if (!failure)
    for (const auto& s : t.states)
      if (!(s.conservation_residual < args.tol)) {
        failure = Json{{"check", "conservation"},
                       {"radius", s.r},
                       {"residual", s.conservation_residual},
                       {"tolerance", args.tol}};
        break;
      }
  std::ostringstream csv;
  write_trajectory_csv(csv, t.strided(args.stride));
  emit(args.common, csv.str());

  if (!args.samples_out.empty() && !failure) {
    Vec center = Vec::Zero(args.n);
    if (!args.center.empty()) {
      const auto c = to_doubles(parse_rational_list(args.center, "--center"));
      if (static_cast<int>(c.size()) != args.n) throw UsageError("--center needs n entries");
      for (int i = 0; i < args.n; ++i) center[i] = c[i];
    }
    const double hi = t.states.back().r - center.norm();
    if (!(args.sample_rmin > center.norm() + 1) || !(hi > args.sample_rmin))
      throw UsageError("--sample-rmin must lie inside the trajectory");
    Rng rng = trial_rng(args.common.seed, 1);
    std::vector<Sample> samples;
    for (int k = 0; k < args.sample_count / 2; ++k) {
      const Vec w = random_unit(args.n, rng);
      const double r = std::exp(uniform(rng, std::log(args.sample_rmin), std::log(hi)));
      for (int sign : {1, -1}) {
        const Vec x = sign * r * w;
        samples.push_back({x, t.u_at((x - center).norm())});
      }
    }
    std::ostringstream out;
    write_samples_csv(out, samples);
    write_text_file(args.samples_out, out.str());
  }
  if (failure) {
    report_failure("radial", *failure);
    return kExitVerification;
  }
  return kExitOk;
}

// ------------------------------------------------------------------- fit

struct FitArgs {
  std::string samples_path;
  BranchArgs branch;
  std::string annuli;
  int auto_annuli = 6;
  bool no_remainder_basis = false;
  Common common;
};

int run_fit(const FitArgs& args) {
  check_output_path(args.common.out);
  std::ifstream in(args.samples_path);
  if (!in) throw UsageError("cannot open " + args.samples_path);
  const std::vector<Sample> samples = read_samples_csv(in);
  if (samples.empty()) throw UsageError("sample file has no rows");
  const int n = static_cast<int>(samples.front().x.size());
  const PhaseBranch branch = make_branch(args.branch);
  FitOptions options;
  options.auto_annuli = args.auto_annuli;
  options.remainder_basis = !args.no_remainder_basis;
  if (!args.annuli.empty())
    for (const auto& part : split(args.annuli, ',')) {
      const auto ends = split(part, ':');
      if (ends.size() != 2) throw UsageError("--annuli expects r_min:r_max,...");
      try {
        options.annuli.push_back({std::stod(ends[0]), std::stod(ends[1])});
      } catch (const std::exception&) {
        throw UsageError("--annuli expects numbers, got \"" + part + "\"");
      }
    }
  const ExpansionFit fit = fit_expansion(samples, n, branch, options);
  Json report = fit_to_json(fit);
  report["command"] = "fit";
  emit(args.common, dump(report));
  return kExitOk;
}

// ------------------------------------------------------ residual-scaling

struct ScalingArgs {
  int n = 3;
  BranchArgs branch;
  std::string lambda;
  int degree = 3;
  int jets = 10;
  std::string jet_scale = "8";
  double margin = 0.1;
  Common common;
};

int run_residual_scaling(const ScalingArgs& args) {
  check_output_path(args.common.out);
  if (args.n < 3) throw UsageError("residual-scaling needs n >= 3");
  if (args.jets < 1) throw UsageError("--jets must be positive");
  const PhaseBranch branch = make_branch(args.branch);
  Rng rng = trial_rng(args.common.seed, 0);
  const Spectrum s = spectrum_option(args.lambda, args.n, branch, rng);
  const KelvinFrame frame = KelvinFrame::make(branch, s.to_doubles());
  const Rational jet_scale = parse_rational_list(args.jet_scale, "--jet-scale").at(0);
  if (jet_scale <= 0) throw UsageError("--jet-scale must be positive");
  const double threshold = args.n - 2 - args.margin;
  Json slopes = Json::array();
  double min_slope = std::numeric_limits<double>::infinity();
  Json failure = nullptr;
  for (int j = 0; j < args.jets; ++j) {
    Rng jr = trial_rng(args.common.seed, 1 + j);
    const MultiPoly v = random_test_jet(args.n, args.degree, jet_scale, jr);
    const Vec dir = random_unit(args.n, jr);
    const PolyJet jet(v);
    std::vector<double> lx, ly;
    for (int e = 3; e <= 10; ++e) {
      const double t = std::ldexp(1.0, -e);
      const ResidualBreakdown r = transformed_residual(jet.at(t * dir), frame);
      if (r.nonlinear_term != 0.0) {
        lx.push_back(std::log(t));
        ly.push_back(std::log(std::abs(r.nonlinear_term)));
      }
    }
    double slope = std::numeric_limits<double>::infinity();
    if (lx.size() >= 2) {
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i], my += ly[i];
      mx /= lx.size();
      my /= lx.size();
      double sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
      }
      slope = sxy / sxx;
    }
    slopes.push_back(std::isfinite(slope) ? Json(slope) : Json(nullptr));
    min_slope = std::min(min_slope, slope);
    if (failure.is_null() && !(slope >= threshold))
      failure = {{"check", "nonlinear slope"}, {"jet", j}, {"v", poly_to_json(v)}, {"slope", slope}};
  }
  const Json report = {{"command", "residual-scaling"},
                       {"n", args.n},
                       {"seed", args.common.seed},
                       {"frame", frame_to_json(frame)},
                       {"linear_factor", linear_part_factor(branch, frame.lambda)},
                       {"slopes", slopes},
                       {"min_slope", std::isfinite(min_slope) ? Json(min_slope) : Json(nullptr)},
                       {"threshold", threshold},
                       {"pass", failure.is_null()},
                       {"first_failure", failure}};
  emit(args.common, dump(report));
  if (!failure.is_null()) {
    report_failure("residual-scaling", failure);
    return kExitVerification;
  }
  return kExitOk;
}

template <class Args>
Command make_command(CLI::App* sub, std::shared_ptr<Args> args, int (*run)(const Args&)) {
  return {sub, [args, run] { return run(*args); }};
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
  std::vector<Command> out;

  {
    auto a = std::make_shared<LemmasArgs>();
    auto* sub = app.add_subcommand("lemmas", "Exact symmetric-function identities on random spectra");
    sub->add_option("--n", a->n, "Dimension")->required();
    sub->add_option("--trials", a->trials, "Random spectra")->capture_default_str();
    sub->add_option("--pairs", a->pairs, "(a, b) pairs per spectrum")->capture_default_str();
    add_common(sub, a->common);
    out.push_back(make_command(sub, a, &run_lemmas));
  }
  {
    auto a = std::make_shared<KelvinCheckArgs>();
    auto* sub = app.add_subcommand("kelvin-check", "Finite-difference check of the transformed Hessian");
    sub->add_option("--n", a->n, "Dimension")->capture_default_str();
    add_branch(sub, a->branch, false);
    sub->add_option("--lambda", a->lambda, "Eigenvalues of A, e.g. 1,2,-1/2 (random when omitted)");
    sub->add_option("--frame", a->frame_path, "Frame JSON (overrides branch and lambda)")
        ->check(CLI::ExistingFile);
    sub->add_option("--v", a->v_path, "Polynomial JSON for v (random when omitted)")
        ->check(CLI::ExistingFile);
    sub->add_option("--degree", a->degree, "Degree of the random v")->capture_default_str();
    sub->add_option("--samples", a->samples, "Sample points")->capture_default_str();
    sub->add_option("--step", a->step, "Finite-difference step")->capture_default_str();
    sub->add_option("--tol", a->tol, "Relative tolerance")->capture_default_str();
    sub->add_option("--rmin", a->rmin, "Smallest |x|")->capture_default_str();
    sub->add_option("--rmax", a->rmax, "Largest |x|")->capture_default_str();
    add_common(sub, a->common);
    out.push_back(make_command(sub, a, &run_kelvin_check));
  }
  {
    auto a = std::make_shared<PoissonArgs>();
    auto* sub = app.add_subcommand("poisson", "Solve Laplacian(|y|^{n-2} u) = |y|^{n-4} h exactly");
    sub->add_option("--n", a->n, "Dimension")->capture_default_str();
    sub->add_option("--source", a->h_path, "Homogeneous polynomial JSON for h")->check(CLI::ExistingFile);
    sub->add_option("--degree", a->degree, "Degree of a random h");
    add_common(sub, a->common);
    out.push_back(make_command(sub, a, &run_poisson));
  }
  {
    auto a = std::make_shared<ResidualN3Args>();
    auto* sub = app.add_subcommand("residual-n3", "Exact n = 3 residual of v = P + |y| Q");
    sub->add_option("--lambda", a->lambda, "Eigenvalues of A, e.g. 1,2,3")->required();
    sub->add_option("--P", a->p_path, "Polynomial JSON for P")->check(CLI::ExistingFile);
    sub->add_option("--Q", a->q_path, "Polynomial JSON for Q")->check(CLI::ExistingFile);
    sub->add_option("--v0", a->v0, "Constant P (default 1)");
    add_common(sub, a->common);
    out.push_back(make_command(sub, a, &run_residual_n3));
  }
  {
    auto a = std::make_shared<Expand3Args>();
    auto* sub = app.add_subcommand("expand3", "Correction recursion for n = 3");
    sub->add_option("--lambda", a->lambda, "Eigenvalues of A (random when omitted)");
    sub->add_option("--P", a->p_path, "Polynomial JSON for P")->check(CLI::ExistingFile);
    sub->add_option("--v0", a->v0, "Constant P (default 1)");
    sub->add_option("--order", a->order, "Target order")->capture_default_str();
    sub->add_flag("--check-q2", a->check_q2, "Fail unless the first correction equals Q2");
    add_common(sub, a->common);
    out.push_back(make_command(sub, a, &run_expand3));
  }
  {
    auto a = std::make_shared<RadialArgs>();
    auto* sub = app.add_subcommand("radial", "Integrate a radial exterior solution");
    add_branch(sub, a->branch, true);
    sub->add_option("--n", a->n, "Dimension")->capture_default_str();
    sub->add_option("--u1", a->u1, "u(1)")->capture_default_str();
    sub->add_option("--p1", a->p1, "u'(1) (quadratic fixed point when omitted)");
    sub->add_option("--rmax", a->rmax, "Final radius")->capture_default_str();
    sub->add_option("--step", a->step, "RK4 step")->capture_default_str();
    sub->add_option("--stride", a->stride, "Write every stride-th node")->capture_default_str();
    sub->add_option("--tol", a->tol, "Conservation tolerance")->capture_default_str();
    sub->add_option("--samples-out", a->samples_out, "Also write full-field samples (CSV)");
    sub->add_option("--sample-count", a->sample_count, "Number of samples")->capture_default_str();
    sub->add_option("--sample-rmin", a->sample_rmin, "Smallest sample |x|")->capture_default_str();
    sub->add_option("--center", a->center, "Center of the radial field, e.g. 0.5,-0.25");
    add_common(sub, a->common);
    out.push_back(make_command(sub, a, &run_radial));
  }
  {
    auto a = std::make_shared<FitArgs>();
    auto* sub = app.add_subcommand("fit", "Fit the exterior expansion to sampled data");
    sub->add_option("--samples", a->samples_path, "CSV with header x1,...,xn,u")
        ->required()
        ->check(CLI::ExistingFile);
    add_branch(sub, a->branch, false);
    sub->add_option("--annuli", a->annuli, "r_min:r_max,... (geometric split when omitted)");
    sub->add_option("--auto-annuli", a->auto_annuli, "Number of automatic annuli")->capture_default_str();
    sub->add_flag("--no-remainder-basis", a->no_remainder_basis,
                  "n >= 3: fit the quadratic basis on the outer annulus only");
    add_common(sub, a->common);
    out.push_back(make_command(sub, a, &run_fit));
  }
  {
    auto a = std::make_shared<ScalingArgs>();
    auto* sub = app.add_subcommand("residual-scaling",
                                   "Log-log slope of the nonlinear part of the transformed residual");
    sub->add_option("--n", a->n, "Dimension")->capture_default_str();
    add_branch(sub, a->branch, false);
    sub->add_option("--lambda", a->lambda, "Eigenvalues of A (random when omitted)");
    sub->add_option("--degree", a->degree, "Degree of the random jets")->capture_default_str();
    sub->add_option("--jets", a->jets, "Number of random jets")->capture_default_str();
    sub->add_option("--jet-scale", a->jet_scale, "Degree-k parts of the jets are damped by scale^-k")
        ->capture_default_str();
    sub->add_option("--margin", a->margin, "Allowed shortfall below n - 2")->capture_default_str();
    add_common(sub, a->common);
    out.push_back(make_command(sub, a, &run_residual_scaling));
  }
  return out;
}

}  // namespace kelvinasym::cli
