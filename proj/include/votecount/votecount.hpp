#pragma once

#include "votecount/bounds.hpp"
#include "votecount/construct.hpp"
#include "votecount/csv.hpp"
#include "votecount/curves.hpp"
#include "votecount/estimate.hpp"
#include "votecount/exact_math.hpp"
#include "votecount/parallel.hpp"
#include "votecount/rng.hpp"
#include "votecount/sim.hpp"
