#pragma once

// Umbrella header: exact desk-scale models of lattice metric spaces, the Ord
// rank of finite set systems, bounded r-disjoint cover search with
// certificates, and decomposition witnesses.

#include "trasdim/errors.hpp"
#include "trasdim/rng.hpp"
#include "trasdim/ordinal.hpp"
#include "trasdim/set_system.hpp"
#include "trasdim/point.hpp"
#include "trasdim/window.hpp"
#include "trasdim/metric.hpp"
#include "trasdim/cover.hpp"
#include "trasdim/search.hpp"
#include "trasdim/witness.hpp"
#include "trasdim/json_io.hpp"
