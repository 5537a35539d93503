#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "io.hpp"
#include "portrait.hpp"

namespace blowup::cli {

IndexedEquilibria list_equilibria(const ChartSystem& system) {
  IndexedEquilibria out;
  try {
    for (auto& e : find_equilibria(system, EquilibriumSearch::FiniteOnly))
      out.records.push_back(classify_spectrum(system, e));
  } catch (const NumericalError& e) {
    if (e.kind() != "DegenerateSystem") throw;
    out.finite_note = e.what();
  }
  for (auto& e : find_equilibria(system, EquilibriumSearch::InfinityOnly))
    out.records.push_back(classify_spectrum(system, e));
  return out;
}

const EquilibriumRecord& pick_equilibrium(const IndexedEquilibria& eqs, std::optional<int> index) {
  if (index) {
    if (*index < 0 || *index >= static_cast<int>(eqs.records.size()))
      throw ValidationError("BadIndex", "equilibrium index " + std::to_string(*index) + " out of range [0, " +
                                            std::to_string(eqs.records.size()) + ")");
    return eqs.records[static_cast<std::size_t>(*index)];
  }
  const EquilibriumRecord* fallback = nullptr;
  for (const auto& e : eqs.records) {
    if (e.chart == Chart::XY) continue;
    if (e.domain != Domain::Degenerate) return e;
    if (!fallback) fallback = &e;
  }
  if (!fallback) throw ValidationError("BadIndex", "the system has no equilibrium at infinity");
  return *fallback;
}

Point default_approach_start(const EquilibriumRecord& eq) { return {eq.location[0] + 0.5, eq.location[1] + 0.1}; }

DetourReport run_detour(const ChartSystem& system, const EquilibriumRecord& eq, int cycles, double radius,
                        const Point& start, double closure_threshold) {
  const Trajectory approach = approach_blowup(system, eq, start);
  return masuda_detour(system, eq, approach, radius, cycles, closure_threshold);
}

int resolve_jobs(int flag_value) {
  if (const char* env = std::getenv("BLOWUP_JOBS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::logic_error&) {
      throw ValidationError("BadEnvironment", std::string("BLOWUP_JOBS is not an integer: '") + env + "'");
    }
  }
  return std::max(1, flag_value);
}

namespace {

json system_header(const LoadedSystem& sys) {
  json params = json::object();
  for (const auto& [k, v] : sys.params) params[k] = v;
  return {{"name", sys.name}, {"parameters", params}, {"degree", sys.field.degree_m}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ValidationError("FileNotWritable", "cannot write '" + path + "'");
  f << text;
}

json holonomy_json(const HolonomyEstimate& h) {
  json raw = json::array();
  for (const auto& r : h.raw_ratios) raw.push_back(to_json(r));
  return {{"multiplier", to_json(h.multiplier)},
          {"fiber_radii", h.fiber_radii},
          {"raw_ratios", raw},
          {"richardson_order", h.richardson_order},
          {"predicted", h.predicted ? to_json(*h.predicted) : json(nullptr)},
          {"deviation", h.predicted ? json(h.deviation) : json(nullptr)}};
}

json windings_json(const Windings& w, Chart chart) {
  const bool uz = chart == Chart::UZ;
  auto opt = [](const std::optional<int>& v) { return v ? json(*v) : json(nullptr); };
  return {{"w_t", opt(w.w_t)}, {uz ? "w_u" : "w_v", opt(w.w_1)}, {uz ? "w_z" : "w_w", opt(w.w_2)}};
}

json detour_json(const DetourReport& r) {
  return {{"cycles", r.cycles},
          {"chart", to_string(r.chart)},
          {"t_loop", to_json(r.t_loop)},
          {"t_enter", to_json(r.t_enter)},
          {"t_estimate", to_json(r.t_estimate)},
          {"fit_coefficient", to_json(r.fit_coefficient)},
          {"fit_exponent", r.fit_exponent},
          {"a_u", to_json(r.a_u)},
          {"start_state", to_json(r.start_state)},
          {"end_state", to_json(r.end_state)},
          {"discrepancy", r.discrepancy},
          {"relative_discrepancy", r.relative_discrepancy},
          {"closure_threshold", r.closure_threshold},
          {"closed", r.closed},
          {"windings", windings_json(r.windings, r.chart)},
          {"cycle_discrepancy", r.cycle_discrepancy}};
}

json transform_json(const TruncatedTransform& t) {
  auto mat = [](const Mat2& m) {
    return json::array({json::array({to_json(m[0][0]), to_json(m[0][1])}), json::array({to_json(m[1][0]), to_json(m[1][1])})});
  };
  json scan = json::array();
  for (const auto& d : t.scan_log)
    scan.push_back({{"order", d.order}, {"iota", d.iota}, {"alpha", {d.alpha1, d.alpha2}}, {"value", to_json(d.value)}});
  return {{"order", t.order_N},
          {"chart", to_string(t.chart)},
          {"base", to_json(t.base)},
          {"linear", mat(t.linear)},
          {"linear_inverse", mat(t.linear_inverse)},
          {"eigenvalues", json::array({to_json(t.eigenvalues[0]), to_json(t.eigenvalues[1])})},
          {"psi_1", to_json(t.psi_u)},
          {"psi_2", to_json(t.psi_z)},
          {"inverse_1", to_json(t.inverse_u)},
          {"inverse_2", to_json(t.inverse_z)},
          {"min_denominator", t.min_denominator},
          {"max_coefficient", t.max_coefficient},
          {"denominators", scan}};
}

json field_json(const PlanarField& f) { return {{"f", to_json(f.f)}, {"g", to_json(f.g)}, {"degree", f.degree_m}}; }

// Antiderivative of g with G(0) = 0.
std::vector<cplx> integrate_coefficients(const std::vector<double>& g) {
  std::vector<cplx> G{0.0};
  for (std::size_t i = 0; i < g.size(); ++i) G.push_back(g[i] / static_cast<double>(i + 1));
  return G;
}

struct Options {
  std::string spec;
  std::string path_file, start_text, chart_name = "XY", clock = "original", out_file;
  double rel_tol = 1e-10, abs_tol = 1e-12, max_step = 0.01;
  bool no_switch = false;
  std::optional<int> eq_index;
  double radius = 0.05;
  std::string fiber_radii;
  bool clockwise = false;
  int cycles = 1;
  double threshold = 1e-6;
  std::string trajectory_file;
  bool star = false;
  int order = kDefaultNormalFormOrder;
  std::optional<double> residual_radius;
  std::string portrait_file, svg_file = "portrait.svg", csv_file = "portrait.csv";
  bool reproducible = false;
  int jobs = 1;
  std::string g_text;
  double pendulum_radius = 0.3;
  int max_m = 16;
  bool table = false;
  bool small_divisors = false;
  int max_divisor_order = 50;
  std::string catalog_target;
};

int dispatch(CLI::App& app, Options& o, std::ostream& out) {
  const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front();
  if (!sub) throw ValidationError("UsageError", "no subcommand given; see --help");
  const std::string name = sub->get_name();

  if (name == "trees") {
    if (o.max_m < 2 || o.max_m > 30) throw ValidationError("OutOfRange", "--max-m must lie in [2, 30]");
    json rows = json::array();
    for (int m = 2; m <= o.max_m; ++m) rows.push_back({{"m", m}, {"count", tree_count(m)}});
    if (o.table) {
      out << "m,count\n";
      for (const auto& r : rows) out << r["m"].get<int>() << ',' << r["count"].get<std::int64_t>() << '\n';
    } else {
      out << dump({{"rows", rows}}) << '\n';
    }
    return 0;
  }

  if (name == "catalog") {
    if (sub->got_subcommand("list")) {
      json arr = json::array();
      for (const auto& info : catalog_list()) {
        json defaults = json::object();
        for (const auto& [k, v] : info.defaults) defaults[k] = v;
        arr.push_back({{"name", info.name}, {"description", info.description}, {"defaults", defaults}, {"required", info.required}});
      }
      out << dump({{"entries", arr}}) << '\n';
      return 0;
    }
    if (sub->got_subcommand("show")) {
      std::string target = o.catalog_target;
      if (target.rfind("catalog:", 0) != 0) target = "catalog:" + target;
      const LoadedSystem sys = load_system(target);
      json expected = json::object();
      for (const auto& [k, v] : sys.entry->expected) expected[k] = to_json(v);
      json doc = system_header(sys);
      doc["description"] = sys.entry->description;
      doc["xy_field"] = field_json(sys.charts.xy_field);
      doc["uz_field"] = field_json(sys.charts.uz_field);
      doc["vw_field"] = field_json(sys.charts.vw_field);
      doc["euler_multiplier"] = sys.euler_multiplier ? to_json(*sys.euler_multiplier) : json(nullptr);
      doc["hamiltonian"] = sys.hamiltonian ? to_json(sys.hamiltonian->H) : json(nullptr);
      doc["expected"] = expected;
      out << dump(doc) << '\n';
      return 0;
    }
    throw ValidationError("UsageError", "catalog needs 'list' or 'show'");
  }

  if (name == "pendulum") {
    const auto g = parse_reals(o.g_text);
    const PendulumWindings w = pendulum_loop_windings(integrate_coefficients(g), o.pendulum_radius);
    out << dump({{"g", g},
                 {"m", w.m},
                 {"w_t", w.w_t},
                 {"w_v", w.w_v},
                 {"w_w", w.w_w},
                 {"leaves", w.leaves},
                 {"theta_radius", w.theta_radius},
                 {"exponent_ratio", w.exponent_ratio},
                 {"fit_residual", w.fit_residual},
                 {"closure_discrepancy", w.closure_discrepancy}})
        << '\n';
    return 0;
  }

  const LoadedSystem sys = load_system(o.spec);

  if (name == "classify") {
    const IndexedEquilibria eqs = list_equilibria(sys.charts);
    json arr = json::array();
    for (std::size_t i = 0; i < eqs.records.size(); ++i) {
      json rec = {{"index", i}};
      rec.update(to_json(eqs.records[i]));
      if (o.small_divisors) {
        json sd = json::array();
        for (const auto& d : small_divisor_scan(eqs.records[i], o.max_divisor_order))
          sd.push_back({{"order", d.order}, {"iota", d.iota}, {"alpha", {d.alpha1, d.alpha2}}, {"magnitude", d.magnitude}});
        rec["small_divisors"] = sd;
      }
      arr.push_back(rec);
    }
    json doc = system_header(sys);
    doc["finite_note"] = eqs.finite_note ? json(*eqs.finite_note) : json(nullptr);
    doc["equilibria"] = arr;
    out << dump(doc) << '\n';
    return 0;
  }

  if (name == "integrate") {
    const TimePath path = parse_path_json(read_json_file(o.path_file));
    IntegrationConfig cfg;
    cfg.rel_tol = o.rel_tol;
    cfg.abs_tol = o.abs_tol;
    cfg.max_step = o.max_step;
    cfg.allow_chart_switch = !o.no_switch;
    if (o.clock == "chart") cfg.clock = TimeMode::Chart;
    else if (o.clock != "original") throw ValidationError("UsageError", "--clock must be 'original' or 'chart'");
    cfg.validate();
    const Trajectory tr = integrate_path(sys.charts, chart_from_string(o.chart_name), parse_point(o.start_text), path, cfg);
    std::ostringstream csv;
    write_trajectory_csv(csv, tr);
    if (o.out_file.empty()) out << csv.str();
    else write_text(o.out_file, csv.str());
    return 0;
  }

  if (name == "holonomy") {
    const IndexedEquilibria eqs = list_equilibria(sys.charts);
    const EquilibriumRecord& eq = pick_equilibrium(eqs, o.eq_index);
    std::vector<double> radii = {1e-2, 5e-3, 2.5e-3};
    if (!o.fiber_radii.empty()) radii = parse_reals(o.fiber_radii);
    const HolonomyEstimate h = holonomy_multiplier(sys.charts, eq, o.radius, radii, !o.clockwise);
    json doc = system_header(sys);
    doc["equilibrium"] = to_json(eq);
    doc["base_radius"] = o.radius;
    doc.update(holonomy_json(h));
    out << dump(doc) << '\n';
    return 0;
  }

  if (name == "detour") {
    const IndexedEquilibria eqs = list_equilibria(sys.charts);
    const EquilibriumRecord& eq = pick_equilibrium(eqs, o.eq_index);
    const Point start = o.start_text.empty() ? default_approach_start(eq) : parse_point(o.start_text);
    const DetourReport rep = run_detour(sys.charts, eq, o.cycles, o.radius, start, o.threshold);
    json doc = system_header(sys);
    doc["equilibrium"] = to_json(eq);
    doc["radius"] = o.radius;
    doc.update(detour_json(rep));
    if (o.star) {
      json star = json::array();
      if (rep.closed)
        for (const auto& b : blowup_star(sys.charts, eq, rep))
          star.push_back({{"direction", to_json(b.direction)}, {"kind", b.kind == BranchKind::BlowUp ? "BlowUp" : "BlowDown"}});
      doc["star"] = star;
    }
    if (!o.trajectory_file.empty()) {
      std::ostringstream csv;
      write_trajectory_csv(csv, rep.loop_trajectory);
      write_text(o.trajectory_file, csv.str());
    }
    out << dump(doc) << '\n';
    return 0;
  }

  if (name == "linearize") {
    const IndexedEquilibria eqs = list_equilibria(sys.charts);
    const EquilibriumRecord& eq = pick_equilibrium(eqs, o.eq_index);
    const TruncatedTransform tr = poincare_linearize(sys.charts, eq, o.order);
    json doc = system_header(sys);
    doc["equilibrium"] = to_json(eq);
    doc["transform"] = transform_json(tr);
    if (o.residual_radius) {
      const ConjugacyResidual r = conjugacy_residual(sys.charts, eq, tr, *o.residual_radius);
      doc["residual"] = {{"max_residual", r.max_residual},
                         {"fitted_order", std::isfinite(r.fitted_order) ? json(r.fitted_order) : json("inf")},
                         {"radii", r.radii},
                         {"residuals", r.residuals}};
    }
    out << dump(doc) << '\n';
    return 0;
  }

  if (name == "portrait") {
    const PortraitSpec spec = parse_portrait_spec(read_json_file(o.portrait_file));
    const PortraitResult res = sample_portrait(sys.charts, spec, resolve_jobs(o.jobs));
    write_text(o.svg_file, portrait_svg(spec, res, o.reproducible));
    write_text(o.csv_file, portrait_csv(res));
    json doc = system_header(sys);
    doc.update(portrait_summary(spec, res));
    doc["svg"] = o.svg_file;
    doc["csv"] = o.csv_file;
    out << dump(doc) << '\n';
    return 0;
  }
  throw ValidationError("UsageError", "unknown subcommand '" + name + "'");
}

void print_error(std::ostream& err, const std::string& kind, const std::string& category, const std::string& msg) {
  err << json{{"error", kind}, {"category", category}, {"message", msg}}.dump() << '\n';
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complex-time blow-up analysis of planar polynomial vector fields", "blowup"};
  app.require_subcommand(1);
  Options o;

  auto* classify = app.add_subcommand("classify", "equilibrium report (JSON)");
  classify->add_option("spec", o.spec, "system JSON file or catalog:name?k=v")->required();
  classify->add_flag("--small-divisors", o.small_divisors, "append the small-divisor scan per equilibrium");
  classify->add_option("--max-order", o.max_divisor_order, "highest order of the scan");

  auto* integrate = app.add_subcommand("integrate", "trajectory CSV along a time path");
  integrate->add_option("spec", o.spec)->required();
  integrate->add_option("--path", o.path_file, "path JSON file")->required();
  integrate->add_option("--start", o.start_text, "re,im,re,im (or two reals)")->required();
  integrate->add_option("--chart", o.chart_name, "XY, UZ or VW");
  integrate->add_option("--clock", o.clock, "original or chart");
  integrate->add_option("--rel-tol", o.rel_tol);
  integrate->add_option("--abs-tol", o.abs_tol);
  integrate->add_option("--max-step", o.max_step);
  integrate->add_flag("--no-switch", o.no_switch, "stay in the starting chart");
  integrate->add_option("--out", o.out_file, "write the CSV here instead of stdout");

  auto* holonomy = app.add_subcommand("holonomy", "holonomy multiplier (JSON)");
  holonomy->add_option("spec", o.spec)->required();
  holonomy->add_option("--eq", o.eq_index, "equilibrium index from classify");
  holonomy->add_option("--radius", o.radius, "base loop radius");
  holonomy->add_option("--fiber-radii", o.fiber_radii, "comma-separated fiber radii");
  holonomy->add_flag("--clockwise", o.clockwise);

  auto* detour = app.add_subcommand("detour", "detour around the blow-up time (JSON)");
  detour->add_option("spec", o.spec)->required();
  detour->add_option("--eq", o.eq_index, "equilibrium index from classify");
  detour->add_option("--cycles", o.cycles);
  detour->add_option("--radius", o.radius, "loop radius in original time");
  detour->add_option("--start", o.start_text, "approach start in the equilibrium's chart");
  detour->add_option("--threshold", o.threshold, "relative closure threshold");
  detour->add_option("--trajectory", o.trajectory_file, "write the loop trajectory CSV here");
  detour->add_flag("--star", o.star, "append the blow-up star of a closed detour");

  auto* linearize = app.add_subcommand("linearize", "Poincare normal form transform (JSON)");
  linearize->add_option("spec", o.spec)->required();
  linearize->add_option("--eq", o.eq_index, "equilibrium index from classify");
  linearize->add_option("--order", o.order, "truncation order N");
  linearize->add_option("--residual-radius", o.residual_radius, "also fit the conjugacy residual on this ball");

  auto* portrait = app.add_subcommand("portrait", "phase portrait (SVG + CSV, JSON summary)");
  portrait->add_option("spec", o.spec)->required();
  portrait->add_option("--portrait", o.portrait_file, "portrait JSON file")->required();
  portrait->add_option("--svg", o.svg_file);
  portrait->add_option("--csv", o.csv_file);
  portrait->add_option("--jobs", o.jobs, "parallel seeds; BLOWUP_JOBS overrides");
  portrait->add_flag("--reproducible", o.reproducible, "omit the SVG timestamp");

  auto* pendulum = app.add_subcommand("pendulum", "windings of the zero-energy pendulum loop (JSON)");
  pendulum->add_option("--g", o.g_text, "ascending real coefficients of g in x'' = g(x)")->required();
  pendulum->add_option("--radius", o.pendulum_radius, "initial regularizing radius");

  auto* trees = app.add_subcommand("trees", "planar tree counts");
  trees->add_option("--max-m", o.max_m);
  trees->add_flag("--table", o.table, "CSV table instead of JSON");

  auto* catalog = app.add_subcommand("catalog", "built-in systems");
  catalog->require_subcommand(1);
  catalog->add_subcommand("list", "names, defaults and descriptions");
  auto* show = catalog->add_subcommand("show", "one entry with its chart fields");
  show->add_option("name", o.catalog_target, "name or catalog:name?k=v")->required();

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    print_error(err, "UsageError", "validation", e.what());
    return 2;
  }

  try {
    return dispatch(app, o, out);
  } catch (const Error& e) {
    const bool validation = e.category() == ErrorCategory::Validation;
    print_error(err, e.kind(), validation ? "validation" : "numerical", e.what());
    return validation ? 2 : 3;
  } catch (const std::exception& e) {
    print_error(err, "InternalError", "numerical", e.what());
    return 3;
  }
}

}  // namespace blowup::cli
