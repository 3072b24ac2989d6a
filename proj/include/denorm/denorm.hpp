#pragma once

#include "denorm/model.hpp"
#include "denorm/signature.hpp"
#include "denorm/sizing.hpp"
#include "denorm/refine.hpp"
#include "denorm/generate.hpp"
#include "denorm/workload.hpp"
#include "denorm/config.hpp"
#include "denorm/costs.hpp"
#include "denorm/query_cost.hpp"
#include "denorm/simulate.hpp"
