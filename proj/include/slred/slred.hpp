#pragma once

#include "slred/boolmean.hpp"
#include "slred/context.hpp"
#include "slred/core.hpp"
#include "slred/eigen.hpp"
#include "slred/grover.hpp"
#include "slred/integrate.hpp"
#include "slred/minimize.hpp"
#include "slred/oracle.hpp"
#include "slred/qpe.hpp"
#include "slred/sat.hpp"
#include "slred/tsp.hpp"
