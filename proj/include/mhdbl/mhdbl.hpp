#pragma once

// Umbrella header.
#include "mhdbl/banded.hpp"
#include "mhdbl/config.hpp"
#include "mhdbl/diagnostics.hpp"
#include "mhdbl/driver.hpp"
#include "mhdbl/dynamics.hpp"
#include "mhdbl/errors.hpp"
#include "mhdbl/field.hpp"
#include "mhdbl/grid.hpp"
#include "mhdbl/heat_oracle.hpp"
#include "mhdbl/mms.hpp"
#include "mhdbl/snapshot.hpp"
#include "mhdbl/spectral.hpp"
#include "mhdbl/state.hpp"
#include "mhdbl/stencil.hpp"
#include "mhdbl/suites.hpp"
#include "mhdbl/verify.hpp"
