#pragma once

#include "cosmoflux/errors.hpp"
#include "cosmoflux/fock.hpp"
#include "cosmoflux/spacetime.hpp"
#include "cosmoflux/thermo.hpp"
#include "cosmoflux/fluctuation.hpp"
#include "cosmoflux/config.hpp"
#include "cosmoflux/report.hpp"
