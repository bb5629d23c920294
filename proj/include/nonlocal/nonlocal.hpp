#pragma once

// Umbrella header for the nonlocal pattern-formation toolkit:
// grids and kernels, the truncated convolution operator, its spectrum,
// explicit time integration, invariant-profile analysis, stationary
// refinement, branch scans, pattern metrics, and file formats.

#include "nonlocal/grid.hpp"
#include "nonlocal/rng.hpp"
#include "nonlocal/kernel.hpp"
#include "nonlocal/config.hpp"
#include "nonlocal/operator.hpp"
#include "nonlocal/spectral.hpp"
#include "nonlocal/dynamics.hpp"
#include "nonlocal/invariant_sets.hpp"
#include "nonlocal/stationary.hpp"
#include "nonlocal/bifurcation.hpp"
#include "nonlocal/metrics.hpp"
#include "nonlocal/io.hpp"
#include "nonlocal/configfile.hpp"
#include "nonlocal/presets.hpp"
