#include "portrait.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <numbers>
#include <sstream>
#include <thread>

#include "commands.hpp"

namespace blowup::cli {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ValidationError("ParseError", "portrait: " + msg); }

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) bad(std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

std::pair<double, double> range(const json& grid, const char* key) {
  if (!grid.contains(key) || !grid[key].is_array() || grid[key].size() != 2 || !grid[key][0].is_number() ||
      !grid[key][1].is_number())
    bad(std::string("grid.") + key + " must be [min, max]");
  return {grid[key][0].get<double>(), grid[key][1].get<double>()};
}

double linspace(double lo, double hi, int i, int n) { return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1); }

// The plotted coordinate of a sample, when the portrait chart sees it.
std::optional<cplx> projected(const PortraitSpec& spec, const Sample& s) {
  const auto p = convert(s.chart, spec.chart, s.coords);
  if (!p) return std::nullopt;
  return (*p)[spec.coordinate];
}

struct View {
  double x0, x1, y0, y1;
};

View view_of(const PortraitSpec& spec) {
  if (spec.styling.contains("view")) {
    const json& v = spec.styling["view"];
    if (!v.is_array() || v.size() != 4) bad("styling.view must be [re_min, re_max, im_min, im_max]");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
  }
  // Grid box padded by half its size, never degenerate.
  const double wr = std::max(spec.re_max - spec.re_min, 1.0), wi = std::max(spec.im_max - spec.im_min, 1.0);
  return {spec.re_min - 0.5 * wr, spec.re_max + 0.5 * wr, spec.im_min - 0.5 * wi, spec.im_max + 0.5 * wi};
}

}  // namespace

PortraitSpec parse_portrait_spec(const json& doc) {
  if (!doc.is_object()) bad("top level must be an object");
  PortraitSpec spec;
  spec.chart = chart_from_string(doc.value("chart", "XY"));
  if (!doc.contains("grid") || !doc["grid"].is_object()) bad("missing 'grid' object");
  const json& grid = doc["grid"];
  spec.coordinate = grid.value("coordinate", 0);
  if (spec.coordinate != 0 && spec.coordinate != 1) bad("grid.coordinate must be 0 or 1");
  std::tie(spec.re_min, spec.re_max) = range(grid, "re");
  std::tie(spec.im_min, spec.im_max) = range(grid, "im");
  if (!grid.contains("counts") || !grid["counts"].is_array() || grid["counts"].size() != 2 ||
      !grid["counts"][0].is_number_integer() || !grid["counts"][1].is_number_integer())
    bad("grid.counts must be [re_count, im_count]");
  spec.re_count = grid["counts"][0].get<int>();
  spec.im_count = grid["counts"][1].get<int>();
  if (spec.re_count < 0 || spec.im_count < 0) bad("grid.counts must be nonnegative");
  if (grid.contains("fixed")) spec.fixed = complex_from_json(grid["fixed"], "portrait: grid.fixed");

  const json dir = doc.value("time_direction", json("Real"));
  if (dir.is_string() && dir.get<std::string>() == "Real") {
    spec.direction = PortraitSpec::Direction::Real;
  } else if (dir.is_string() && dir.get<std::string>() == "Imaginary") {
    spec.direction = PortraitSpec::Direction::Imaginary;
  } else if (dir.is_object() && dir.contains("ray")) {
    spec.direction = PortraitSpec::Direction::Ray;
    spec.ray_angle = number(dir, "ray");
  } else {
    bad("time_direction must be \"Real\", \"Imaginary\" or {\"ray\": angle}");
  }
  spec.horizon = number(doc, "horizon");
  if (!(spec.horizon > 0.0)) bad("horizon must be positive");
  if (doc.contains("styling")) {
    if (!doc["styling"].is_object()) bad("styling must be an object");
    spec.styling = doc["styling"];
  }
  if (doc.contains("star")) {
    const json& st = doc["star"];
    if (!st.is_object() || !st.contains("eq") || !st["eq"].is_number_integer()) bad("star needs an integer 'eq'");
    spec.star_eq = st["eq"].get<int>();
    spec.star_cycles = st.value("cycles", 1);
    spec.star_radius = st.value("radius", 0.05);
  }
  return spec;
}

PortraitResult sample_portrait(const ChartSystem& system, const PortraitSpec& spec, int jobs) {
  PortraitResult result;
  const int n = spec.re_count * spec.im_count;
  result.seeds.resize(static_cast<std::size_t>(n));
  cplx direction = 1.0;
  if (spec.direction == PortraitSpec::Direction::Imaginary) direction = {0.0, 1.0};
  if (spec.direction == PortraitSpec::Direction::Ray) direction = std::polar(1.0, spec.ray_angle);
  const TimePath path = TimePath::line(0.0, spec.horizon * direction);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      SeedResult& seed = result.seeds[static_cast<std::size_t>(i)];
      const int a = i % spec.re_count, b = i / spec.re_count;
      const cplx c{linspace(spec.re_min, spec.re_max, a, spec.re_count), linspace(spec.im_min, spec.im_max, b, spec.im_count)};
      seed.start = spec.coordinate == 0 ? Point{c, spec.fixed} : Point{spec.fixed, c};
      try {
        seed.trajectory = integrate_path(system, spec.chart, seed.start, path);
      } catch (const Error& e) {
        seed.error = e.kind();
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min(std::max(jobs, 1), std::max(n, 1));
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (spec.star_eq) {
    const IndexedEquilibria eqs = list_equilibria(system);
    const EquilibriumRecord& eq = pick_equilibrium(eqs, spec.star_eq);
    const DetourReport rep =
        run_detour(system, eq, spec.star_cycles, spec.star_radius, default_approach_start(eq), 1e-6);
    result.star_equilibrium = eq;
    if (rep.closed) result.star = blowup_star(system, eq, rep);
  }
  return result;
}

std::string portrait_svg(const PortraitSpec& spec, const PortraitResult& result, bool reproducible) {
  const View v = view_of(spec);
  const double width = spec.styling.value("width", 600.0), height = spec.styling.value("height", 600.0);
  const std::string stroke = spec.styling.value("stroke", std::string("#1f4e9c"));
  const double stroke_width = spec.styling.value("stroke_width", 1.0);
  auto X = [&](double re) { return (re - v.x0) / (v.x1 - v.x0) * width; };
  auto Y = [&](double im) { return (v.y1 - im) / (v.y1 - v.y0) * height; };
  auto inside = [&](cplx p) {
    return p.real() >= v.x0 && p.real() <= v.x1 && p.imag() >= v.y0 && p.imag() <= v.y1;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt17(width) << "\" height=\"" << fmt17(height)
      << "\" viewBox=\"0 0 " << fmt17(width) << ' ' << fmt17(height) << "\">\n";
  if (!reproducible) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    svg << "<metadata>generated " << stamp << "</metadata>\n";
  }
  svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt17(width) << "\" height=\"" << fmt17(height)
      << "\" fill=\"white\" stroke=\"black\"/>\n";
  svg << "<g stroke=\"#888\" stroke-width=\"0.5\">\n";
  if (v.y0 <= 0 && v.y1 >= 0)
    svg << "<line x1=\"0\" y1=\"" << fmt17(Y(0)) << "\" x2=\"" << fmt17(width) << "\" y2=\"" << fmt17(Y(0)) << "\"/>\n";
  if (v.x0 <= 0 && v.x1 >= 0)
    svg << "<line x1=\"" << fmt17(X(0)) << "\" y1=\"0\" x2=\"" << fmt17(X(0)) << "\" y2=\"" << fmt17(height) << "\"/>\n";
  svg << "</g>\n";

  svg << "<g fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt17(stroke_width) << "\">\n";
  for (const auto& seed : result.seeds) {
    // Split the polyline wherever the point leaves the view or the chart.
    std::string d;
    bool pen_down = false;
    for (const auto& s : seed.trajectory.samples) {
      const auto p = projected(spec, s);
      if (!p || !inside(*p)) {
        pen_down = false;
        continue;
      }
      d += (pen_down ? " L" : " M") + fmt17(X(p->real())) + ',' + fmt17(Y(p->imag()));
      pen_down = true;
    }
    if (!d.empty()) svg << "<path d=\"" << d.substr(1) << "\"/>\n";
  }
  svg << "</g>\n";

  if (!result.star.empty() && result.star_equilibrium && result.star_equilibrium->chart == spec.chart) {
    const cplx c = result.star_equilibrium->location[spec.coordinate];
    const double len = 0.1 * (v.x1 - v.x0);
    svg << "<g stroke-width=\"2\">\n";
    for (const auto& b : result.star) {
      const cplx tip = c + len * b.direction;
      svg << "<line x1=\"" << fmt17(X(c.real())) << "\" y1=\"" << fmt17(Y(c.imag())) << "\" x2=\""
          << fmt17(X(tip.real())) << "\" y2=\"" << fmt17(Y(tip.imag())) << "\" stroke=\""
          << (b.kind == BranchKind::BlowUp ? "#c0392b" : "#27ae60") << "\"/>\n";
    }
    svg << "</g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string portrait_csv(const PortraitResult& result) {
  std::ostringstream csv;
  csv << "seed,s,re_t,im_t,chart,re_c1,im_c1,re_c2,im_c2\n";
  for (std::size_t i = 0; i < result.seeds.size(); ++i)
    for (const auto& s : result.seeds[i].trajectory.samples)
      csv << i << ',' << fmt17(s.s) << ',' << fmt17(s.t.real()) << ',' << fmt17(s.t.imag()) << ',' << to_string(s.chart)
          << ',' << fmt17(s.coords[0].real()) << ',' << fmt17(s.coords[0].imag()) << ',' << fmt17(s.coords[1].real())
          << ',' << fmt17(s.coords[1].imag()) << '\n';
  return csv.str();
}

json portrait_summary(const PortraitSpec& spec, const PortraitResult& result) {
  json seeds = json::array();
  for (std::size_t i = 0; i < result.seeds.size(); ++i) {
    const auto& seed = result.seeds[i];
    json s;
    s["index"] = i;
    s["start"] = to_json(seed.start);
    if (!seed.error.empty() || seed.trajectory.samples.empty()) {
      s["status"] = seed.error.empty() ? "Empty" : seed.error;
      s["end"] = nullptr;
      s["end_chart"] = nullptr;
      s["t_end"] = nullptr;
    } else {
      const Sample& last = seed.trajectory.back();
      s["status"] = to_string(seed.trajectory.terminated_reason);
      const auto back = convert(last.chart, spec.chart, last.coords);
      s["end"] = back ? to_json(*back) : json(nullptr);
      s["end_chart"] = to_string(last.chart);
      s["t_end"] = to_json(last.t);
    }
    s["samples"] = seed.trajectory.samples.size();
    seeds.push_back(s);
  }
  json star = json::array();
  for (const auto& b : result.star)
    star.push_back({{"direction", to_json(b.direction)}, {"kind", b.kind == BranchKind::BlowUp ? "BlowUp" : "BlowDown"}});
  return {{"chart", to_string(spec.chart)}, {"seed_count", result.seeds.size()}, {"seeds", seeds}, {"star", star}};
}

}  // namespace blowup::cli
