#pragma once

#include "breaking_predictor.hpp"
#include "burgers_semigroup.hpp"
#include "characteristics.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "poisson_kernel.hpp"
#include "presets.hpp"
#include "splitting_solver.hpp"
#include "tolerances.hpp"
#include "verification.hpp"
