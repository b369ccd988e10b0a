#pragma once

#include "lgi/core/error.hpp"
#include "lgi/core/gaussian_integral.hpp"
#include "lgi/core/quadrature.hpp"
#include "lgi/core/special.hpp"
#include "lgi/core/tolerances.hpp"
#include "lgi/core/types.hpp"
#include "lgi/explorer/contours.hpp"
#include "lgi/explorer/minimize.hpp"
#include "lgi/explorer/scan.hpp"
#include "lgi/explorer/window.hpp"
#include "lgi/field.hpp"
#include "lgi/field_oracle.hpp"
#include "lgi/fock_oracle.hpp"
#include "lgi/oscillator.hpp"
#include "lgi/version.hpp"
