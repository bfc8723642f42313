// pqrm.hpp: umbrella header

#pragma once

#include "pqrm/errors.hpp"
#include "pqrm/params.hpp"
#include "pqrm/fft.hpp"
#include "pqrm/grid.hpp"
#include "pqrm/band_models.hpp"
#include "pqrm/qrm.hpp"
#include "pqrm/observables.hpp"
#include "pqrm/scenario.hpp"
#include "pqrm/config.hpp"
#include "pqrm/csv.hpp"
#include "pqrm/svg.hpp"
