#pragma once

// Umbrella header: probabilistic physical search on general graphs.

#include "psearch/common.hpp"
#include "psearch/deadline_tsp.hpp"
#include "psearch/exact.hpp"
#include "psearch/experiment.hpp"
#include "psearch/generator.hpp"
#include "psearch/heuristics.hpp"
#include "psearch/instance.hpp"
#include "psearch/io.hpp"
#include "psearch/kmst.hpp"
#include "psearch/monte_carlo.hpp"
#include "psearch/plan_eval.hpp"
#include "psearch/random.hpp"
#include "psearch/shortest_path.hpp"
#include "psearch/transforms.hpp"
