#pragma once

// Umbrella header.

#include "hybridsim/coupling.hpp"
#include "hybridsim/cryo_budget.hpp"
#include "hybridsim/dynamics.hpp"
#include "hybridsim/electrostatics.hpp"
#include "hybridsim/error.hpp"
#include "hybridsim/lc_circuit.hpp"
#include "hybridsim/modulation.hpp"
#include "hybridsim/numerics.hpp"
#include "hybridsim/quantities.hpp"
#include "hybridsim/trap_geometry.hpp"
#include "hybridsim/workbench/config.hpp"
#include "hybridsim/workbench/report.hpp"
#include "hybridsim/workbench/scenarios.hpp"
#include "hybridsim/workbench/toml_lite.hpp"
