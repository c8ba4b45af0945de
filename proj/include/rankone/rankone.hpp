// Umbrella header.
#pragma once

#include "rankone/analyzer.hpp"
#include "rankone/cellset.hpp"
#include "rankone/correlation.hpp"
#include "rankone/cyclic_approx.hpp"
#include "rankone/geometry.hpp"
#include "rankone/io.hpp"
#include "rankone/permutation.hpp"
#include "rankone/poisson.hpp"
#include "rankone/product.hpp"
#include "rankone/rational.hpp"
#include "rankone/schedule.hpp"
