#pragma once

#include "conley/config.hpp"
#include "conley/error.hpp"
#include "conley/flow.hpp"
#include "conley/geometry.hpp"
#include "conley/graph_algorithms.hpp"
#include "conley/grid.hpp"
#include "conley/index_pair.hpp"
#include "conley/lyapunov.hpp"
#include "conley/random.hpp"
#include "conley/recurrence.hpp"
#include "conley/serialization.hpp"
#include "conley/transition_graph.hpp"
#include "conley/verify.hpp"
