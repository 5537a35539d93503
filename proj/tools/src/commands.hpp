#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "blowup/blowup.hpp"

namespace blowup::cli {

// Equilibria in the fixed order used by every --eq index: finite ones first, then
// those at infinity. A finite search that finds a curve of equilibria is reported in
// finite_note instead of failing the whole listing.
struct IndexedEquilibria {
  std::vector<EquilibriumRecord> records;
  std::optional<std::string> finite_note;
};

IndexedEquilibria list_equilibria(const ChartSystem& system);

// Default: the first nondegenerate equilibrium at infinity.
const EquilibriumRecord& pick_equilibrium(const IndexedEquilibria& eqs, std::optional<int> index);

// Off the invariant line in both coordinates, so every winding is defined.
Point default_approach_start(const EquilibriumRecord& eq);

DetourReport run_detour(const ChartSystem& system, const EquilibriumRecord& eq, int cycles, double radius,
                        const Point& start, double closure_threshold);

// BLOWUP_JOBS wins over the flag; at least 1.
int resolve_jobs(int flag_value);

// Entry point shared by the executable and the tests. Returns the process exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blowup::cli
