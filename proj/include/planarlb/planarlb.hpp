#pragma once

#include "planarlb/engines.hpp"
#include "planarlb/error.hpp"
#include "planarlb/graph.hpp"
#include "planarlb/graph_io.hpp"
#include "planarlb/grid_embedding.hpp"
#include "planarlb/matrix.hpp"
#include "planarlb/oracles.hpp"
#include "planarlb/reduction_apsp.hpp"
#include "planarlb/reduction_matching.hpp"
#include "planarlb/reduction_oumv.hpp"
#include "planarlb/reduction_variants.hpp"
#include "planarlb/report.hpp"
