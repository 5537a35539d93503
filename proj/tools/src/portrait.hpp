#pragma once

#include <optional>
#include <string>
#include <vector>

#include "io.hpp"

namespace blowup::cli {

struct PortraitSpec {
  Chart chart = Chart::XY;
  int coordinate = 0;  // which chart coordinate the grid varies
  double re_min = -1, re_max = 1, im_min = -1, im_max = 1;
  int re_count = 1, im_count = 1;
  cplx fixed;  // value of the other coordinate
  enum class Direction { Real, Imaginary, Ray } direction = Direction::Real;
  double ray_angle = 0.0;
  double horizon = 1.0;
  json styling = json::object();
  // Overlay of the blow-up star at this equilibrium index.
  std::optional<int> star_eq;
  int star_cycles = 1;
  double star_radius = 0.05;
};

// Throws ValidationError "ParseError" with the offending field.
PortraitSpec parse_portrait_spec(const json& doc);

struct SeedResult {
  Point start{};
  Trajectory trajectory;
  std::string error;  // kind of a per-seed failure, empty on success
};

struct PortraitResult {
  std::vector<SeedResult> seeds;  // grid order, real part fastest
  std::vector<Branch> star;
  std::optional<EquilibriumRecord> star_equilibrium;
};

PortraitResult sample_portrait(const ChartSystem& system, const PortraitSpec& spec, int jobs);

std::string portrait_svg(const PortraitSpec& spec, const PortraitResult& result, bool reproducible);
std::string portrait_csv(const PortraitResult& result);
json portrait_summary(const PortraitSpec& spec, const PortraitResult& result);

}  // namespace blowup::cli
