#pragma once

#include "milne/amplitude_phase.hpp"
#include "milne/complex.hpp"
#include "milne/convergence.hpp"
#include "milne/ddouble.hpp"
#include "milne/errors.hpp"
#include "milne/finite_difference.hpp"
#include "milne/grid.hpp"
#include "milne/hermite.hpp"
#include "milne/integrate.hpp"
#include "milne/pendulum.hpp"
#include "milne/potential.hpp"
#include "milne/report.hpp"
#include "milne/schrodinger.hpp"

namespace milne {
inline constexpr const char* version = "1.0.0";
}
