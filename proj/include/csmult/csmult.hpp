#pragma once

#include "csmult/cauchy.hpp"
#include "csmult/config.hpp"
#include "csmult/functions.hpp"
#include "csmult/geometry.hpp"
#include "csmult/multiplier.hpp"
#include "csmult/numerics.hpp"
#include "csmult/parallel.hpp"
#include "csmult/poly.hpp"
#include "csmult/report.hpp"
#include "csmult/runner.hpp"
#include "csmult/spaces.hpp"
#include "csmult/verify.hpp"
