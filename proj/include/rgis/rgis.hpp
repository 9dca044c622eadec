#pragma once

#include "rgis/analytics.hpp"
#include "rgis/cover.hpp"
#include "rgis/edge_list.hpp"
#include "rgis/error.hpp"
#include "rgis/graph.hpp"
#include "rgis/montecarlo.hpp"
#include "rgis/parallel.hpp"
#include "rgis/process.hpp"
#include "rgis/random.hpp"
#include "rgis/serialize.hpp"
#include "rgis/typicality.hpp"
#include "rgis/vertex_set.hpp"
