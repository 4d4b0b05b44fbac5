#pragma once

#include <string>
#include <vector>

#include "hybridtherm/timeseries/frame.hpp"

namespace hybridtherm {

/// Declared column: name, group, unit. The sidecar schema file holds one
/// `name = Group, unit` line per column.
struct ColumnSpec {
    std::string name;
    FeatureGroup group;
    std::string unit;
};

using FrameSchema = std::vector<ColumnSpec>;

/// Parses a key=value schema sidecar.
FrameSchema load_schema(const std::string& path);
void write_schema(const FrameSchema& schema, const std::string& path);

FrameSchema schema_of(const TimeSeriesFrame& frame);

/// Reads a CSV whose first column is `timestamp` (ISO-8601 UTC) and whose
/// remaining header names match the schema. Unparseable numeric cells become
/// missing values. Throws on a missing file, duplicate column, or
/// non-monotonic timestamps.
TimeSeriesFrame load_csv(const std::string& path, const FrameSchema& schema);

/// Convenience: loads `path` with the schema at `path_schema`.
TimeSeriesFrame load_csv_with_sidecar(const std::string& path, const std::string& schema_path);

/// Writes the frame as CSV. Values are printed with shortest round-trip
/// formatting, so write-out is bit-stable and load_csv(write_csv(f)) == f.
void write_csv(const TimeSeriesFrame& frame, const std::string& path);

}  // namespace hybridtherm
