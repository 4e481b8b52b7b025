#pragma once

#include "parlap/alpha_bound.hpp"
#include "parlap/chain.hpp"
#include "parlap/core/error.hpp"
#include "parlap/core/parallel.hpp"
#include "parlap/core/random.hpp"
#include "parlap/dd_subset.hpp"
#include "parlap/exact_oracle.hpp"
#include "parlap/generators.hpp"
#include "parlap/io.hpp"
#include "parlap/jacobi.hpp"
#include "parlap/multigraph.hpp"
#include "parlap/richardson.hpp"
#include "parlap/schur_approx.hpp"
#include "parlap/solver.hpp"
#include "parlap/terminal_walks.hpp"
