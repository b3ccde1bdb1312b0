#pragma once

#include "multiindex.hpp"
#include "basis.hpp"
#include "rng.hpp"
#include "chaos.hpp"
#include "models.hpp"
#include "ode.hpp"
#include "propagator.hpp"
#include "bridge.hpp"
#include "baselines.hpp"
#include "stats.hpp"
#include "experiment.hpp"
