#pragma once

#include "partlat/big_count.hpp"
#include "partlat/decomposition.hpp"
#include "partlat/error.hpp"
#include "partlat/factorization.hpp"
#include "partlat/graph.hpp"
#include "partlat/lattice.hpp"
#include "partlat/limits.hpp"
#include "partlat/literal_recursion.hpp"
#include "partlat/property_suite.hpp"
#include "partlat/rank_size_recursion.hpp"
#include "partlat/red_atoms.hpp"
#include "partlat/report.hpp"
