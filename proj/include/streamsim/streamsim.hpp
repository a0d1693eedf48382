// Copyright 2026 The streamsim Authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "streamsim/arrivals.hpp"
#include "streamsim/cli.hpp"
#include "streamsim/cluster.hpp"
#include "streamsim/config.hpp"
#include "streamsim/driver.hpp"
#include "streamsim/engine.hpp"
#include "streamsim/metrics.hpp"
#include "streamsim/random.hpp"
#include "streamsim/rational.hpp"
#include "streamsim/simulation.hpp"
#include "streamsim/time.hpp"
#include "streamsim/workload.hpp"
