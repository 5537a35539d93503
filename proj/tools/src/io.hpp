#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "blowup/blowup.hpp"

namespace blowup::cli {

using json = nlohmann::ordered_json;

// A system loaded from a JSON file or a catalog:name?k=v URI.
struct LoadedSystem {
  std::string name;
  ParameterMap params;
  PlanarField field;
  std::optional<PolynomialHamiltonian> hamiltonian;
  std::optional<BivariatePolynomial> euler_multiplier;
  std::optional<CatalogEntry> entry;
  ChartSystem charts;
};

// Throws ValidationError "ParseError" (with the offending entry), "DegreeZero", "FileNotFound".
LoadedSystem load_system(const std::string& spec);
LoadedSystem parse_system_json(const json& doc, const std::string& origin);

json read_json_file(const std::string& path);

// Complex numbers travel as [re, im]; a bare number is accepted on input.
json to_json(cplx c);
cplx complex_from_json(const json& j, const std::string& where);
json to_json(const Point& p);
json to_json(const BivariatePolynomial& p);
json to_json(const TimePath& path);
json to_json(const EquilibriumRecord& eq);

TimePath parse_path_json(const json& doc);

// "a,b,c,d" -> (a + bi, c + di); two values are taken as real parts.
Point parse_point(const std::string& text);
std::vector<double> parse_reals(const std::string& text);

// Serializes with every double printed to 17 significant digits.
std::string dump(const json& j, int indent = 2);

// %.17g
std::string fmt17(double v);

}  // namespace blowup::cli
