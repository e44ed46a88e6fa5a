#pragma once

// Umbrella header for the whole library.

#include "lorcomp/common.hpp"
#include "lorcomp/congruence.hpp"
#include "lorcomp/counterexample.hpp"
#include "lorcomp/initial_data.hpp"
#include "lorcomp/integral_bounds.hpp"
#include "lorcomp/level_sets.hpp"
#include "lorcomp/model_geometry.hpp"
#include "lorcomp/serialization.hpp"
