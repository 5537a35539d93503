#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace blowup::cli {

namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw ValidationError("ParseError", msg); }

ParameterMap parse_query(const std::string& query) {
  ParameterMap out;
  std::stringstream ss(query);
  std::string item;
  while (std::getline(ss, item, '&')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) parse_error("catalog parameter '" + item + "' needs the form key=value");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      const double v = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      out[key] = v;
    } catch (const std::logic_error&) {
      parse_error("catalog parameter '" + key + "' is not a number: '" + value + "'");
    }
  }
  return out;
}

BivariatePolynomial parse_terms(const json& arr, const std::string& where) {
  if (!arr.is_array()) parse_error(where + ": expected an array of [j, k, re, im] entries");
  BivariatePolynomial::TermMap terms;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    const json& t = arr[i];
    if (!t.is_array() || (t.size() != 3 && t.size() != 4)) parse_error(at + ": expected [j, k, re, im]");
    for (std::size_t c = 0; c < t.size(); ++c)
      if (!t[c].is_number()) parse_error(at + ": entry " + std::to_string(c) + " is not a number");
    for (int c = 0; c < 2; ++c) {
      const double e = t[c].get<double>();
      if (e < 0 || e != std::floor(e) || e > 1000)
        parse_error(at + ": exponent " + fmt17(e) + " must be a nonnegative integer");
    }
    const cplx coeff{t[2].get<double>(), t.size() == 4 ? t[3].get<double>() : 0.0};
    if (!std::isfinite(coeff.real()) || !std::isfinite(coeff.imag())) parse_error(at + ": coefficient is not finite");
    terms[{t[0].get<int>(), t[1].get<int>()}] += coeff;
  }
  return BivariatePolynomial(terms);
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  return fmt17(v);
}

void dump_into(std::string& out, const json& j, int indent, int depth) {
  const std::string nl = indent >= 0 ? "\n" : "";
  const std::string pad = indent >= 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = indent >= 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const std::string sep = indent >= 0 ? ": " : ":";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{" + nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += "," + nl;
        first = false;
        out += pad + json(it.key()).dump() + sep;
        dump_into(out, it.value(), indent, depth + 1);
      }
      out += nl + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short numeric arrays (complex pairs, terms) stay on one line.
      bool flat = j.size() <= 4;
      for (const auto& v : j) flat = flat && v.is_primitive();
      if (flat || indent < 0) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += indent >= 0 ? ", " : ",";
          dump_into(out, j[i], -1, 0);
        }
        out += "]";
        return;
      }
      out += "[" + nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += "," + nl;
        out += pad;
        dump_into(out, j[i], indent, depth + 1);
      }
      out += nl + close_pad + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dump(const json& j, int indent) {
  std::string out;
  dump_into(out, j, indent, 0);
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("FileNotFound", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    parse_error(path + ": " + e.what());
  }
}

LoadedSystem parse_system_json(const json& doc, const std::string& origin) {
  if (!doc.is_object()) parse_error(origin + ": top level must be an object");
  LoadedSystem sys;
  sys.name = doc.value("name", origin);
  if (doc.contains("parameters")) {
    if (!doc["parameters"].is_object()) parse_error(origin + ": parameters must be an object");
    for (auto it = doc["parameters"].begin(); it != doc["parameters"].end(); ++it) {
      if (!it.value().is_number()) parse_error(origin + ": parameters." + it.key() + " must be numeric");
      sys.params[it.key()] = it.value().get<double>();
    }
  }
  const bool has_fg = doc.contains("f") || doc.contains("g");
  if (doc.contains("H")) {
    if (has_fg) parse_error(origin + ": give either f/g or H, not both");
    PolynomialHamiltonian ham;
    ham.H = parse_terms(doc["H"], origin + ": H");
    ham.level_c = doc.contains("level") ? complex_from_json(doc["level"], origin + ": level") : cplx{0.0};
    if (ham.H.degree() < 2) throw ValidationError("DegreeZero", origin + ": H must have degree >= 2");
    sys.hamiltonian = ham;
    sys.field = hamiltonian_field(ham);
  } else {
    if (!doc.contains("f") || !doc.contains("g")) parse_error(origin + ": missing 'f' or 'g'");
    BivariatePolynomial f = parse_terms(doc["f"], origin + ": f");
    BivariatePolynomial g = parse_terms(doc["g"], origin + ": g");
    if (std::max(f.degree(), g.degree()) == 0)
      throw ValidationError("DegreeZero", origin + ": the field has no nonconstant term");
    sys.field = make_field(std::move(f), std::move(g));
  }
  if (doc.contains("multiplier")) sys.euler_multiplier = parse_terms(doc["multiplier"], origin + ": multiplier");
  sys.charts = sys.euler_multiplier ? to_charts(sys.field, *sys.euler_multiplier) : to_charts(sys.field);
  return sys;
}

LoadedSystem load_system(const std::string& spec) {
  static const std::string scheme = "catalog:";
  if (spec.rfind(scheme, 0) == 0) {
    const std::string rest = spec.substr(scheme.size());
    const auto q = rest.find('?');
    const std::string name = rest.substr(0, q);
    const ParameterMap params = q == std::string::npos ? ParameterMap{} : parse_query(rest.substr(q + 1));
    CatalogEntry e = catalog_get(name, params);
    LoadedSystem sys;
    sys.name = e.name;
    sys.params = e.params;
    sys.field = e.field;
    sys.hamiltonian = e.hamiltonian;
    sys.euler_multiplier = e.euler_multiplier;
    sys.charts = e.charts();
    sys.entry = std::move(e);
    return sys;
  }
  return parse_system_json(read_json_file(spec), spec);
}

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

json to_json(const Point& p) { return json::array({to_json(p[0]), to_json(p[1])}); }

cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  parse_error(where + ": expected a number or [re, im]");
}

json to_json(const BivariatePolynomial& p) {
  json arr = json::array();
  for (const auto& t : p.terms()) arr.push_back(json::array({t.j, t.k, t.c.real(), t.c.imag()}));
  return arr;
}

json to_json(const TimePath& path) {
  json segs = json::array();
  for (const auto& s : path.segments) {
    if (s.kind == Segment::Kind::Line)
      segs.push_back({{"type", "line"}, {"from", to_json(s.from)}, {"to", to_json(s.to)}});
    else
      segs.push_back({{"type", "arc"},
                      {"center", to_json(s.center)},
                      {"radius", s.radius},
                      {"angle_from", s.angle_from},
                      {"angle_to", s.angle_to}});
  }
  return {{"segments", segs}, {"cycles", path.cycles}};
}

json to_json(const EquilibriumRecord& eq) {
  json j;
  j["chart"] = to_string(eq.chart);
  j["location"] = to_json(eq.location);
  j["multiplicity"] = eq.multiplicity;
  j["eigenvalues"] = json::array({to_json(eq.eigenvalues[0]), to_json(eq.eigenvalues[1])});
  j["spectral_quotient"] = to_json(eq.spectral_quotient);
  j["semisimple"] = eq.semisimple;
  j["domain"] = to_string(eq.domain);
  j["resonance"] = {{"kind", to_string(eq.resonance.kind)}, {"order", eq.resonance.order}};
  j["rational_quotient"] = eq.rational_quotient
                               ? json::array({eq.rational_quotient->first, eq.rational_quotient->second})
                               : json(nullptr);
  j["note"] = eq.note;
  return j;
}

TimePath parse_path_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("segments") || !doc["segments"].is_array())
    parse_error("path: expected an object with a 'segments' array");
  TimePath path;
  for (std::size_t i = 0; i < doc["segments"].size(); ++i) {
    const json& s = doc["segments"][i];
    const std::string at = "path.segments[" + std::to_string(i) + "]";
    const std::string type = s.value("type", "");
    if (type == "line") {
      if (!s.contains("from") || !s.contains("to")) parse_error(at + ": line needs 'from' and 'to'");
      path.segments.push_back(Segment::line(complex_from_json(s["from"], at + ".from"), complex_from_json(s["to"], at + ".to")));
    } else if (type == "arc") {
      for (const char* key : {"center", "radius", "angle_from", "angle_to"})
        if (!s.contains(key)) parse_error(at + ": arc needs '" + key + "'");
      if (!s["radius"].is_number() || !s["angle_from"].is_number() || !s["angle_to"].is_number())
        parse_error(at + ": radius and angles must be numbers");
      path.segments.push_back(Segment::arc(complex_from_json(s["center"], at + ".center"), s["radius"].get<double>(),
                                           s["angle_from"].get<double>(), s["angle_to"].get<double>()));
    } else {
      parse_error(at + ": type must be 'line' or 'arc'");
    }
  }
  if (path.segments.empty()) parse_error("path: no segments");
  if (doc.contains("cycles")) {
    if (!doc["cycles"].is_number_integer()) parse_error("path.cycles must be an integer");
    path.cycles = doc["cycles"].get<int>();
  }
  path.validate();
  return path;
}

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      parse_error("'" + item + "' is not a number");
    }
  }
  return out;
}

Point parse_point(const std::string& text) {
  const auto v = parse_reals(text);
  if (v.size() == 2) return {cplx{v[0]}, cplx{v[1]}};
  if (v.size() == 4) return {cplx{v[0], v[1]}, cplx{v[2], v[3]}};
  parse_error("a point needs 2 (real) or 4 (re, im, re, im) values, got " + std::to_string(v.size()));
}

}  // namespace blowup::cli
