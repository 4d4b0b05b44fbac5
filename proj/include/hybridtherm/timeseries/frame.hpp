#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace hybridtherm {

/// Feature-group tag carried by every column.
enum class FeatureGroup { Datetime, Weather, Building, Room, Simulated, Target };

std::string to_string(FeatureGroup g);
FeatureGroup feature_group_from_string(const std::string& s);

/// One named series. Missing values are quiet NaN.
struct Column {
    std::string name;
    FeatureGroup group = FeatureGroup::Weather;
    std::string unit;  // "degC", "W/m2", ... ; "binary"/"enum" marks categorical columns
    std::vector<double> values;

    bool is_categorical() const { return unit == "binary" || unit == "enum"; }
};

inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

/// Timestamped, column-named numeric table. Timestamps are UTC epoch seconds at
/// a fixed nominal step. Immutable once built; operations return new frames.
class TimeSeriesFrame {
public:
    TimeSeriesFrame() = default;

    /// Throws std::invalid_argument if timestamps are not strictly increasing.
    TimeSeriesFrame(std::vector<std::int64_t> timestamps, int step_minutes);

    /// Throws on length mismatch or duplicate name.
    void add_column(Column column);

    std::size_t rows() const { return timestamps_.size(); }
    std::size_t n_columns() const { return columns_.size(); }
    int step_minutes() const { return step_minutes_; }

    const std::vector<std::int64_t>& timestamps() const { return timestamps_; }

    bool has_column(const std::string& name) const { return index_.count(name) != 0; }

    /// Throws std::out_of_range on unknown name.
    const Column& column(const std::string& name) const;
    const Column& column(std::size_t i) const { return columns_.at(i); }

    std::span<const double> values(const std::string& name) const {
        return column(name).values;
    }

    const std::vector<Column>& columns() const { return columns_; }

    std::vector<std::string> column_names() const;
    std::vector<std::string> names_in_group(FeatureGroup g) const;

    /// New frame with the same timestamps and the selected columns (in the given order).
    TimeSeriesFrame select(const std::vector<std::string>& names) const;

    /// New frame with this frame's columns plus the other frame's columns.
    /// Timestamps must match exactly.
    TimeSeriesFrame merged_with(const TimeSeriesFrame& other) const;

    /// New frame restricted to row range [begin, end).
    TimeSeriesFrame slice_rows(std::size_t begin, std::size_t end) const;

    /// Content hash over timestamps and cell values; used as a cache key.
    std::uint64_t content_hash() const;

private:
    std::vector<std::int64_t> timestamps_;
    int step_minutes_ = 1;
    std::vector<Column> columns_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace hybridtherm
