#pragma once

#include "gribov/linalg/band_matrix.hpp"
#include "gribov/linalg/determinant.hpp"
#include "gribov/linalg/eigensolver.hpp"
#include "gribov/linalg/lu.hpp"
#include "gribov/linalg/singular.hpp"
