#include "hybridtherm/timeseries/frame.hpp"

#include <bit>
#include <stdexcept>

namespace hybridtherm {

std::string to_string(FeatureGroup g) {
    switch (g) {
        case FeatureGroup::Datetime: return "Datetime";
        case FeatureGroup::Weather: return "Weather";
        case FeatureGroup::Building: return "Building";
        case FeatureGroup::Room: return "Room";
        case FeatureGroup::Simulated: return "Simulated";
        case FeatureGroup::Target: return "Target";
    }
    return "?";
}

FeatureGroup feature_group_from_string(const std::string& s) {
    if (s == "Datetime") return FeatureGroup::Datetime;
    if (s == "Weather") return FeatureGroup::Weather;
    if (s == "Building") return FeatureGroup::Building;
    if (s == "Room") return FeatureGroup::Room;
    if (s == "Simulated") return FeatureGroup::Simulated;
    if (s == "Target") return FeatureGroup::Target;
    throw std::invalid_argument("unknown feature group: '" + s + "'");
}

TimeSeriesFrame::TimeSeriesFrame(std::vector<std::int64_t> timestamps, int step_minutes)
    : timestamps_(std::move(timestamps)), step_minutes_(step_minutes) {
    if (step_minutes_ <= 0) throw std::invalid_argument("step_minutes must be positive");
    for (std::size_t i = 1; i < timestamps_.size(); ++i)
        if (timestamps_[i] <= timestamps_[i - 1])
            throw std::invalid_argument("non-monotonic timestamps");
}

void TimeSeriesFrame::add_column(Column column) {
    if (column.values.size() != timestamps_.size())
        throw std::invalid_argument("column '" + column.name + "' length " +
                                    std::to_string(column.values.size()) +
                                    " != row count " + std::to_string(timestamps_.size()));
    if (index_.count(column.name))
        throw std::invalid_argument("duplicate column: '" + column.name + "'");
    index_.emplace(column.name, columns_.size());
    columns_.push_back(std::move(column));
}

const Column& TimeSeriesFrame::column(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw std::out_of_range("unknown column: '" + name + "'");
    return columns_[it->second];
}

std::vector<std::string> TimeSeriesFrame::column_names() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const auto& c : columns_) out.push_back(c.name);
    return out;
}

std::vector<std::string> TimeSeriesFrame::names_in_group(FeatureGroup g) const {
    std::vector<std::string> out;
    for (const auto& c : columns_)
        if (c.group == g) out.push_back(c.name);
    return out;
}

TimeSeriesFrame TimeSeriesFrame::select(const std::vector<std::string>& names) const {
    TimeSeriesFrame out(timestamps_, step_minutes_);
    for (const auto& n : names) out.add_column(column(n));
    return out;
}

TimeSeriesFrame TimeSeriesFrame::merged_with(const TimeSeriesFrame& other) const {
    if (other.timestamps_ != timestamps_)
        throw std::invalid_argument("merged_with: timestamp mismatch");
    TimeSeriesFrame out = *this;
    for (const auto& c : other.columns_) out.add_column(c);
    return out;
}

TimeSeriesFrame TimeSeriesFrame::slice_rows(std::size_t begin, std::size_t end) const {
    if (begin > end || end > rows()) throw std::out_of_range("slice_rows: bad range");
    TimeSeriesFrame out(std::vector<std::int64_t>(timestamps_.begin() + begin,
                                                  timestamps_.begin() + end),
                        step_minutes_);
    for (const auto& c : columns_) {
        Column nc{c.name, c.group, c.unit,
                  std::vector<double>(c.values.begin() + begin, c.values.begin() + end)};
        out.add_column(std::move(nc));
    }
    return out;
}

std::uint64_t TimeSeriesFrame::content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](std::uint64_t x) {
        h ^= x;
        h *= 0x100000001b3ULL;
        h ^= h >> 29;
    };
    for (const auto t : timestamps_) feed(static_cast<std::uint64_t>(t));
    for (const auto& c : columns_) {
        for (const char ch : c.name) feed(static_cast<unsigned char>(ch));
        for (const double v : c.values) feed(std::bit_cast<std::uint64_t>(v));
    }
    return h;
}

}  // namespace hybridtherm
