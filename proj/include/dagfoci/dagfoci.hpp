#pragma once

// Umbrella header: non-parametric local causal structure discovery around a
// single target variable, built on the CODEC dependence coefficient.

#include "dagfoci/codec.hpp"
#include "dagfoci/dag_foci.hpp"
#include "dagfoci/dataset.hpp"
#include "dagfoci/eval_bench.hpp"
#include "dagfoci/foci.hpp"
#include "dagfoci/indep_test.hpp"
#include "dagfoci/interventional.hpp"
#include "dagfoci/neighbors.hpp"
#include "dagfoci/parallel.hpp"
#include "dagfoci/ranks.hpp"
#include "dagfoci/rng.hpp"
#include "dagfoci/sem_sim.hpp"
