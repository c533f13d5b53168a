#pragma once

// Everything except the CLI layer (fanwalk/cli.hpp), which also needs nlohmann/json.

#include "fanwalk/basis_id.hpp"
#include "fanwalk/combinatorics.hpp"
#include "fanwalk/cone_walk.hpp"
#include "fanwalk/error.hpp"
#include "fanwalk/geometry.hpp"
#include "fanwalk/lp_model.hpp"
#include "fanwalk/oracle.hpp"
#include "fanwalk/phase1.hpp"
#include "fanwalk/reduction.hpp"
#include "fanwalk/simplex_core.hpp"
#include "fanwalk/solver.hpp"
