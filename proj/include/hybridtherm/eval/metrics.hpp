#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hybridtherm/timeseries/frame.hpp"

namespace hybridtherm {

/// Mean absolute error, degrees.
double mae(std::span<const double> y, std::span<const double> y_hat);

/// Mean absolute percentage error as a fraction (0.05 = 5%). Guards against
/// near-zero truths: every |y_t| must be at least 0.5 degC.
double mape(std::span<const double> y, std::span<const double> y_hat);

/// Root mean squared error, degrees.
double rmse(std::span<const double> y, std::span<const double> y_hat);

/// Per-room and room-averaged errors for one experiment cell.
struct MetricReport {
    std::vector<std::string> rooms;
    std::vector<double> mae_c, mape_fraction, rmse_c;  // per room
    double avg_mae_c = 0.0, avg_mape_fraction = 0.0, avg_rmse_c = 0.0;

    /// std(prediction) / std(truth), averaged across rooms; how much of the
    /// real temperature variation the predictions cover.
    double pred_std_ratio = 0.0;

    // Cell metadata.
    std::string scenario, strategy, learner;
    std::uint64_t seed = 0;
    int training_window_months = 0;
};

/// Compares "temp_*" columns of `truth` against "pred_temp_*" columns of
/// `predictions` (aligned timestamps required).
MetricReport evaluate_predictions(const TimeSeriesFrame& truth,
                                  const TimeSeriesFrame& predictions);

struct MonthlyEntry {
    int year = 0;
    int month = 0;
    double mae_c = 0.0, mape_fraction = 0.0, rmse_c = 0.0;  // averaged across rooms
    std::size_t n_rows = 0;
};

/// Calendar-month error breakdown, averaged across rooms; months are reported
/// unpooled and empty buckets are skipped.
std::vector<MonthlyEntry> monthly_breakdown(const TimeSeriesFrame& truth,
                                            const TimeSeriesFrame& predictions);

}  // namespace hybridtherm
