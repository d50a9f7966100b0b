#pragma once

// Umbrella header for the plasmaflow library: delay models of new-plasma
// fraction during therapeutic plasma exchange on a VA or VV ECMO circuit.

#include "plasmaflow/ade.hpp"
#include "plasmaflow/analytic.hpp"
#include "plasmaflow/dde.hpp"
#include "plasmaflow/errors.hpp"
#include "plasmaflow/experiments.hpp"
#include "plasmaflow/grid.hpp"
#include "plasmaflow/history_buffer.hpp"
#include "plasmaflow/io.hpp"
#include "plasmaflow/kinetics.hpp"
#include "plasmaflow/time_series.hpp"
