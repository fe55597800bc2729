#pragma once

// Umbrella header: the full lagged-causal-discovery toolkit.

#include "tempoca/version.hpp"
#include "tempoca/error.hpp"
#include "tempoca/rng.hpp"
#include "tempoca/special.hpp"
#include "tempoca/panel.hpp"
#include "tempoca/graph.hpp"
#include "tempoca/graph_io.hpp"
#include "tempoca/knn.hpp"
#include "tempoca/cmi.hpp"
#include "tempoca/pmime.hpp"
#include "tempoca/pc_pmime.hpp"
#include "tempoca/simulate.hpp"
#include "tempoca/granger.hpp"
#include "tempoca/score.hpp"
#include "tempoca/bench.hpp"
#include "tempoca/manifest.hpp"
