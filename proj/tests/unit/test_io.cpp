#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kelvinasym/errors.hpp"
#include "kelvinasym/io.hpp"
#include "kelvinasym/random.hpp"

using namespace kelvinasym;

TEST_CASE("polynomial JSON round trip") {
  Rng rng = trial_rng(61, 0);
  for (int n = 1; n <= 4; ++n) {
    const MultiPoly p = random_poly(n, 0, 4, rng, 0.4);
    CHECK(poly_from_json(poly_to_json(p)) == p);
    CHECK(poly_from_json(Json::parse(poly_to_json(p).dump())) == p);
  }
  const Json j = poly_to_json(MultiPoly::monomial({2, 0, 1}, Rational(-3, 4)));
  CHECK(j["terms"][0]["coef"] == "-3/4");
  CHECK(j["terms"][0]["exp"] == Json::array({2, 0, 1}));

  const Json integer_coef = {{"n_vars", 2}, {"terms", {{{"coef", 5}, {"exp", {1, 1}}}}}};
  CHECK(poly_from_json(integer_coef) == MultiPoly::monomial({1, 1}, 5));
}

TEST_CASE("polynomial JSON errors") {
  CHECK_THROWS_AS(poly_from_json(Json::parse(R"({"terms": []})")), ParseError);
  CHECK_THROWS_AS(poly_from_json(Json::parse(R"({"n_vars": 0, "terms": []})")), ParseError);
  CHECK_THROWS_AS(poly_from_json(Json::parse(R"({"n_vars": 2, "terms": [{"coef": "1", "exp": [1]}]})")),
                  ParseError);
  CHECK_THROWS_AS(poly_from_json(Json::parse(R"({"n_vars": 1, "terms": [{"coef": "1", "exp": [-1]}]})")),
                  ParseError);
  CHECK_THROWS_AS(poly_from_json(Json::parse(R"({"n_vars": 1, "terms": [{"coef": 0.5, "exp": [1]}]})")),
                  ParseError);
  CHECK_THROWS_AS(poly_from_json(Json::parse(R"({"n_vars": 1, "terms": [{"coef": "1/0", "exp": [1]}]})")),
                  ParseError);
}

TEST_CASE("radpoly JSON round trip keeps the canonical form") {
  Rng rng = trial_rng(62, 0);
  RadPoly e(3, 3);
  for (int k = -1; k <= 2; ++k) e += RadPoly::from_poly(random_poly(3, 0, 3, rng, 0.5), 3, k);
  const RadPoly back = radpoly_from_json(radpoly_to_json(e));
  CHECK(back == e);
  CHECK(back.is_canonical());

  // A slot divisible by r^2 is canonicalized on read; dim defaults to n_vars.
  Json raw = {{"n_vars", 2}, {"slots", {{{"k", 0}, {"poly", poly_to_json(MultiPoly::r_squared(2, 2))}}}}};
  const RadPoly r = radpoly_from_json(raw);
  CHECK(r.dim() == 2);
  CHECK(r.slot(2) == MultiPoly::constant(2, 1));
}

TEST_CASE("spectrum, branch and frame round trips") {
  const Spectrum s({Rational(1, 3), Rational(-2), Rational(7, 5)});
  CHECK(spectrum_from_json(spectrum_to_json(s)).lambda == s.lambda);
  CHECK_THROWS_AS(spectrum_from_json(Json::parse(R"({"n": 2, "lambda": ["1"]})")), ParseError);

  for (const PhaseBranch& b : {PhaseBranch::slag(0.3), PhaseBranch::recip(-1.0),
                               PhaseBranch::from_tau(1.15, 0.2), PhaseBranch::from_tau(0.55, -0.1)}) {
    const PhaseBranch back = branch_from_json(branch_to_json(b));
    CHECK(back.kind == b.kind);
    CHECK(back.theta == b.theta);
    CHECK(back.a == doctest::Approx(b.a).epsilon(1e-15));
    CHECK(back.b == doctest::Approx(b.b).epsilon(1e-15));
  }
  CHECK(branch_from_json(Json::parse(R"({"kind": "slag", "theta": 1})")).kind == BranchKind::SLAG);
  CHECK_THROWS_AS(branch_from_json(Json::parse(R"({"kind": "atan2", "theta": 1})")), ParseError);
  CHECK_THROWS_AS(branch_from_json(Json::parse(R"({"kind": "bogus", "theta": 1})")), ParseError);

  Vec lin(2);
  lin << 0.5, -1.0;
  const KelvinFrame f = KelvinFrame::make(PhaseBranch::from_tau(1.15, 0.0), {0.5, 2.0}, lin, 3.0);
  const KelvinFrame g = frame_from_json(frame_to_json(f));
  CHECK(g.n == 2);
  CHECK(g.lambda == f.lambda);
  CHECK((g.r_diag - f.r_diag).norm() == 0.0);
  CHECK((g.linear - f.linear).norm() == 0.0);
  CHECK(g.constant == 3.0);

  const KelvinFrame h = frame_from_json(Json::parse(R"({"branch": {"kind": "SLAG", "theta": 0}, "lambda": ["1/2", 2]})"));
  CHECK(h.lambda[0] == 0.5);
  CHECK(h.linear.norm() == 0.0);
  CHECK_THROWS_AS(frame_from_json(Json::parse(R"({"branch": {"kind": "SLAG", "theta": 0}, "lambda": [1], "b": [1, 2]})")),
                  ParseError);
}

TEST_CASE("fit JSON carries the documented keys") {
  ExpansionFit f;
  f.n = 2;
  f.A = Mat::Identity(2, 2);
  f.b = Vec::Zero(2);
  f.d = 0.25;
  f.annuli = {{1, 2}, {2, 4}, {4, 8}};
  const Json j = fit_to_json(f);
  for (const char* key : {"n", "A", "b", "c", "d", "decay_slope", "decay_slope_stderr", "remainder_detected",
                          "rms_outer", "rms_outer_quadratic", "rms_outer_without_log", "annuli", "annulus_stats"})
    CHECK(j.contains(key));
  CHECK(j["A"]["entries"].size() == 4);
  CHECK(j["d"] == 0.25);
  CHECK(j["annuli"][2] == Json::array({4.0, 8.0}));
  f.d.reset();
  CHECK(fit_to_json(f)["d"].is_null());
}

TEST_CASE("sample CSV round trip and errors") {
  std::vector<Sample> samples;
  Rng rng = trial_rng(63, 0);
  for (int k = 0; k < 20; ++k) {
    Vec x(3);
    for (int i = 0; i < 3; ++i) x[i] = uniform(rng, -1e3, 1e3);
    samples.push_back({x, uniform(rng, -1, 1) * std::pow(10.0, k - 10)});
  }
  std::ostringstream out;
  write_samples_csv(out, samples);
  CHECK(out.str().rfind("x1,x2,x3,u\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_samples_csv(in);
  REQUIRE(back.size() == samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    CHECK(back[k].x == samples[k].x);
    CHECK(back[k].u == samples[k].u);
  }

  std::istringstream crlf("x1,x2,u\r\n1,2,3\r\n\r\n4, 5 ,6\n");
  CHECK(read_samples_csv(crlf).size() == 2);

  for (const char* bad : {"", "x1,x2\n1,2\n", "x2,x1,u\n", "x1,u\n1,2,3\n", "x1,u\n1,abc\n", "x1,u\n1,2e\n"}) {
    std::istringstream s(bad);
    CHECK_THROWS_AS(read_samples_csv(s), ParseError);
  }
}

TEST_CASE("trajectory CSV and number formatting") {
  std::ostringstream out;
  write_trajectory_csv(out, {{1.0, 0.5, 1.0, 0.0}, {1.5, 1.125, 1.5, 1e-17}});
  CHECK(out.str() == "r,u,du,conservation_residual\n1,0.5,1,0\n1.5,1.125,1.5,1e-17\n");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
  CHECK(std::stod(format_double(M_PI)) == M_PI);
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("JSON files") {
  const auto dir = std::filesystem::temp_directory_path() / "kelvinasym_io_test";
  std::filesystem::create_directories(dir);
  const std::string good = (dir / "good.json").string(), bad = (dir / "bad.json").string();
  write_text_file(good, R"({"n": 3, "list": [1, 2]})");
  write_text_file(bad, "{ not json");
  CHECK(read_json_file(good)["n"] == 3);
  CHECK_THROWS_AS(read_json_file(bad), ParseError);
  CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()), ParseError);
  CHECK_THROWS_AS(write_text_file((dir / "no_such_dir" / "x.txt").string(), "x"), ValueError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("exact report JSON") {
  const ExactReport r = verify_identity(Lemma::L32, Spectrum({Rational(1), Rational(2), Rational(3)}), std::nullopt, 2);
  const Json j = report_to_json(r);
  CHECK(j["lemma"] == "L32");
  CHECK(j["lhs"] == "20");
  CHECK(j["equal"] == true);
}
