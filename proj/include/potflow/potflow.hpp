#pragma once

// Umbrella header: cost-minimal design of potential-based flow networks.

#include "potflow/cuts.hpp"
#include "potflow/flow.hpp"
#include "potflow/graph.hpp"
#include "potflow/instance.hpp"
#include "potflow/io.hpp"
#include "potflow/lp.hpp"
#include "potflow/separation.hpp"
#include "potflow/solver.hpp"
