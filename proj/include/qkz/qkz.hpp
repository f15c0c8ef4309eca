#pragma once

#include "core.hpp"
#include "combinatorics.hpp"
#include "sl2_rep.hpp"
#include "specialfn.hpp"
#include "weightfn.hpp"
#include "rmatrix.hpp"
#include "contour.hpp"
#include "hyperint.hpp"
#include "det.hpp"
