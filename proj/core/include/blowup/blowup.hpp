#pragma once

// Umbrella header for the whole library.

#include "blowup/charts.hpp"
#include "blowup/equilibria.hpp"
#include "blowup/errors.hpp"
#include "blowup/flow.hpp"
#include "blowup/hamiltonian.hpp"
#include "blowup/holonomy.hpp"
#include "blowup/normalform.hpp"
#include "blowup/path.hpp"
#include "blowup/polynomial.hpp"
#include "blowup/scenarios.hpp"
