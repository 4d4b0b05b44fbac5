#pragma once

#include <string>
#include <vector>

#include "hybridtherm/timeseries/frame.hpp"

namespace hybridtherm {

/// Per-column affine transform (x - mean) / stddev fitted on training rows.
/// Population (1/N) standard deviation; constant columns get a stddev
/// substitute of 1 so they map to all-zeros.
class Standardizer {
public:
    Standardizer() = default;

    static Standardizer fit(const TimeSeriesFrame& frame,
                            const std::vector<std::string>& columns);

    /// Transforms the fitted columns; other columns pass through unchanged.
    TimeSeriesFrame apply(const TimeSeriesFrame& frame) const;

    /// Inverse transform of the fitted columns.
    TimeSeriesFrame invert(const TimeSeriesFrame& frame) const;

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<double>& means() const { return means_; }
    const std::vector<double>& stddevs() const { return stddevs_; }

    double mean_of(const std::string& column) const;
    double stddev_of(const std::string& column) const;

private:
    std::vector<std::string> columns_;
    std::vector<double> means_;
    std::vector<double> stddevs_;
};

}  // namespace hybridtherm
