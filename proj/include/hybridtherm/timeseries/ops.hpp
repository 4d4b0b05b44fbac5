#pragma once

#include <cstdint>
#include <utility>

#include "hybridtherm/timeseries/frame.hpp"

namespace hybridtherm {

/// Fills gaps: interior gaps by linear interpolation on time, leading/trailing
/// gaps by the nearest non-missing value. Throws on an all-missing column.
TimeSeriesFrame interpolate_missing(const TimeSeriesFrame& frame);

/// Aggregates to a coarser step. Numeric columns take the arithmetic mean of
/// the covered rows; categorical columns (unit "binary"/"enum") take the last
/// observed value in the bin. The new step must be a multiple of the current
/// one and the frame must be gap-free.
TimeSeriesFrame resample(const TimeSeriesFrame& frame, int step_minutes);

/// Rows strictly before `boundary` (epoch seconds) go to train, the rest to
/// test. Throws if the boundary falls outside the covered range or either
/// part would be empty.
std::pair<TimeSeriesFrame, TimeSeriesFrame> split_train_test(const TimeSeriesFrame& frame,
                                                             std::int64_t boundary);

/// Appends the ordinal datetime feature columns derived from the timestamps:
/// season {0 winter, 1 spring, 2 summer, 3 autumn}, week {0 weekday, 1 weekend},
/// daytime {0 morning, 1 afternoon, 2 evening, 3 night}.
TimeSeriesFrame add_datetime_features(const TimeSeriesFrame& frame);

}  // namespace hybridtherm
