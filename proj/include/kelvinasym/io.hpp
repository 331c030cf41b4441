#ifndef KELVINASYM_IO_HPP
#define KELVINASYM_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "kelvinasym/fit.hpp"
#include "kelvinasym/kelvin.hpp"
#include "kelvinasym/radial.hpp"
#include "kelvinasym/radpoly.hpp"
#include "kelvinasym/symfun.hpp"

namespace kelvinasym {

using Json = nlohmann::ordered_json;

Json poly_to_json(const MultiPoly& p);
MultiPoly poly_from_json(const Json& j);

Json radpoly_to_json(const RadPoly& e);
RadPoly radpoly_from_json(const Json& j);  // "dim" defaults to "n_vars"

Json spectrum_to_json(const Spectrum& s);
Spectrum spectrum_from_json(const Json& j);

Json report_to_json(const ExactReport& r);

// Branch object: { "kind": "SLAG", "theta": ..., "tau": ... }; tau is needed
// only for LOG and ATAN2.
Json branch_to_json(const PhaseBranch& b);
PhaseBranch branch_from_json(const Json& j);

Json frame_to_json(const KelvinFrame& f);
KelvinFrame frame_from_json(const Json& j);

Json matrix_to_json(const Mat& m);
Json matrix_to_json(const RationalMatrix& m);

Json fit_to_json(const ExpansionFit& f);

// Header x1,...,xn,u.
void write_samples_csv(std::ostream& out, const std::vector<Sample>& samples);
std::vector<Sample> read_samples_csv(std::istream& in);

// Header r,u,du,conservation_residual.
void write_trajectory_csv(std::ostream& out, const std::vector<RadialState>& states);

// Shortest decimal form that round-trips the double.
std::string format_double(double x);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace kelvinasym

#endif
