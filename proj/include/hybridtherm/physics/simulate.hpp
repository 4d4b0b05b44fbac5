#pragma once

#include "hybridtherm/physics/network.hpp"
#include "hybridtherm/timeseries/frame.hpp"

namespace hybridtherm {

/// Forward-simulates the network over the driver frame with fixed-step RK4.
/// `step_minutes` is the integration step and must divide the driver step;
/// drivers are held constant over each driver interval. Driver columns a zone
/// references but the frame lacks are treated as zero input. Returns one
/// Simulated column per zone, named "sim_<zone>", at driver resolution, with
/// row i holding the state at timestamp i (row 0 = initial temperatures).
///
/// Throws if the outdoor-temperature column is missing or any referenced
/// driver value is non-finite.
TimeSeriesFrame simulate(const RcNetwork& network, const TimeSeriesFrame& drivers,
                         int step_minutes);

}  // namespace hybridtherm
