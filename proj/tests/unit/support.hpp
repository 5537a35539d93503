#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "blowup/blowup.hpp"

namespace test {

using blowup::cplx;

// The equilibrium of `chart` at `location`, classified.
inline blowup::EquilibriumRecord equilibrium_at(const blowup::ChartSystem& sys, blowup::Chart chart,
                                                const blowup::Point& location) {
  const auto search = chart == blowup::Chart::XY ? blowup::EquilibriumSearch::FiniteOnly
                                                 : blowup::EquilibriumSearch::InfinityOnly;
  for (const auto& found : blowup::find_equilibria(sys, search)) {
    const auto e = blowup::express_in_chart(found, chart);
    if (e && std::abs(e->location[0] - location[0]) < 1e-8 && std::abs(e->location[1] - location[1]) < 1e-8)
      return blowup::classify_spectrum(sys, *e);
  }
  throw std::runtime_error("equilibrium not found");
}

inline cplx random_complex(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> mag(lo, hi), ang(-M_PI, M_PI);
  return std::polar(mag(rng), ang(rng));
}

}  // namespace test
