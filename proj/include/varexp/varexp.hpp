#pragma once

// Umbrella header for the variable-exponent two-solution solver library.

#include "varexp/config.hpp"
#include "varexp/energy.hpp"
#include "varexp/exponent_field.hpp"
#include "varexp/grid.hpp"
#include "varexp/lebesgue.hpp"
#include "varexp/operators.hpp"
#include "varexp/report_io.hpp"
#include "varexp/rng.hpp"
#include "varexp/selftest.hpp"
#include "varexp/solver.hpp"
