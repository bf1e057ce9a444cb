#pragma once

#include "ncg/bench.hpp"
#include "ncg/core.hpp"
#include "ncg/csv.hpp"
#include "ncg/directions.hpp"
#include "ncg/error.hpp"
#include "ncg/linesearch.hpp"
#include "ncg/problems.hpp"
#include "ncg/regression.hpp"
#include "ncg/solver.hpp"
