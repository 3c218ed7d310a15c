#pragma once

// Umbrella header.

#include "showdag/agents.hpp"
#include "showdag/catalog.hpp"
#include "showdag/citest.hpp"
#include "showdag/claims.hpp"
#include "showdag/dsep.hpp"
#include "showdag/errors.hpp"
#include "showdag/graph.hpp"
#include "showdag/graph_dot.hpp"
#include "showdag/graph_json.hpp"
#include "showdag/instances.hpp"
#include "showdag/report.hpp"
#include "showdag/rng.hpp"
#include "showdag/scm.hpp"
#include "showdag/soundness.hpp"
#include "showdag/stats.hpp"
#include "showdag/study.hpp"
