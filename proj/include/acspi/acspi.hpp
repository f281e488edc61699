#pragma once

#include "acspi/errors.hpp"
#include "acspi/fock_oracle.hpp"
#include "acspi/ladder_algebra.hpp"
#include "acspi/models.hpp"
#include "acspi/params.hpp"
#include "acspi/propagator.hpp"
#include "acspi/quadrature.hpp"
#include "acspi/run_config.hpp"
#include "acspi/runner.hpp"
#include "acspi/symbols.hpp"
