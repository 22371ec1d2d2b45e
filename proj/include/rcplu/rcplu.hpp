#pragma once

#include "rcplu/errors.hpp"
#include "rcplu/matrix.hpp"
#include "rcplu/matrix_market.hpp"
#include "rcplu/random.hpp"
#include "rcplu/factorization.hpp"
#include "rcplu/pivot.hpp"
#include "rcplu/sketch.hpp"
#include "rcplu/lu.hpp"
#include "rcplu/diagnostics.hpp"
#include "rcplu/genmat.hpp"
#include "rcplu/experiments.hpp"
