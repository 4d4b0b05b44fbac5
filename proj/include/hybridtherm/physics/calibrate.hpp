#pragma once

#include <string>
#include <vector>

#include "hybridtherm/physics/network.hpp"
#include "hybridtherm/timeseries/frame.hpp"

namespace hybridtherm {

struct CalibrationOptions {
    int max_cycles = 20;
    double rel_improvement_tol = 1e-4;  // stop when a full cycle improves RMSE less than this
    double span_factor = 4.0;           // golden-section bracket [p/span, p*span]
    int golden_iterations = 10;
    int step_minutes = 0;  // RK4 step; 0 = driver step
};

struct CalibrationResult {
    RcNetwork network;
    std::vector<double> room_rmse_c;  // per target column, final network
    double initial_rmse_c = 0.0;
    double final_rmse_c = 0.0;
    int cycles = 0;
    bool converged = false;
};

/// Fits {C_i, R_out_i, nonzero gain coefficients} by cyclic derivative-free
/// golden-section searches in log-space, minimizing the overall RMSE between
/// simulated zone temperatures and the target columns. Targets are matched to
/// zones by name ("<zone>" or "temp_<zone>"); rows are aligned on the
/// timestamp intersection. The objective is non-increasing across accepted
/// steps, so the final RMSE never exceeds the initial one.
///
/// Throws if the timestamp overlap is empty or no zone has a target column.
CalibrationResult calibrate(const RcNetwork& network, const TimeSeriesFrame& drivers,
                            const TimeSeriesFrame& targets,
                            const CalibrationOptions& options = {});

}  // namespace hybridtherm
