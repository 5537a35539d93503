#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blowup/equilibria.hpp"
#include "blowup/hamiltonian.hpp"

namespace blowup {

using ParameterMap = std::map<std::string, double>;

struct CatalogEntry {
  std::string name;
  std::string description;  // which worked example this is
  ParameterMap params;      // after defaults are applied
  PlanarField field;
  std::optional<PolynomialHamiltonian> hamiltonian;
  // Physical field is field / multiplier when set (reciprocal systems).
  std::optional<BivariatePolynomial> euler_multiplier;
  std::map<std::string, cplx> expected;

  ChartSystem charts() const;
};

struct CatalogInfo {
  std::string name;
  std::string description;
  ParameterMap defaults;
  std::vector<std::string> required;
};

std::vector<CatalogInfo> catalog_list();

// Throws ValidationError "UnknownName", "MissingParameter", "UnknownParameter" or
// "ExcludedParameter".
CatalogEntry catalog_get(const std::string& name, const ParameterMap& params = {});

// Number of planar trees with m vertices, 2 <= m <= 30, in exact integer arithmetic.
// Throws ValidationError "OutOfRange".
std::int64_t tree_count(int m);

enum class GalerkinVariant { Symmetric, Asymmetric };

// Closed-form equilibria and spectra of the Galerkin caricatures.
// Symmetric uses parameter a; asymmetric uses b1 and beta (= b3 / b1).
std::vector<EquilibriumRecord> galerkin_spectrum(GalerkinVariant variant, const ParameterMap& params);

}  // namespace blowup
