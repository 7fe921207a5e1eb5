#pragma once

// Umbrella header for the exact Tukey depth library.

#include "tukey/adia.hpp"       // IWYU pragma: export
#include "tukey/bivariate.hpp"  // IWYU pragma: export
#include "tukey/geometry.hpp"   // IWYU pragma: export
#include "tukey/oracle.hpp"     // IWYU pragma: export
#include "tukey/rcom.hpp"       // IWYU pragma: export
