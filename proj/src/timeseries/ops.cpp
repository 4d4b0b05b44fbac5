#include "hybridtherm/timeseries/ops.hpp"

#include <algorithm>
#include <stdexcept>

#include "hybridtherm/core/civil.hpp"

namespace hybridtherm {

TimeSeriesFrame interpolate_missing(const TimeSeriesFrame& frame) {
    TimeSeriesFrame out(frame.timestamps(), frame.step_minutes());
    const auto& ts = frame.timestamps();
    for (const auto& c : frame.columns()) {
        std::vector<double> v = c.values;
        std::vector<std::size_t> present;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!is_missing(v[i])) present.push_back(i);
        if (present.empty())
            throw std::runtime_error("all-missing column: '" + c.name + "'");

        // Edges: nearest non-missing value.
        for (std::size_t i = 0; i < present.front(); ++i) v[i] = v[present.front()];
        for (std::size_t i = present.back() + 1; i < v.size(); ++i) v[i] = v[present.back()];

        // Interior gaps: linear on time between bracketing observations.
        for (std::size_t k = 0; k + 1 < present.size(); ++k) {
            const std::size_t a = present[k], b = present[k + 1];
            if (b == a + 1) continue;
            const double va = v[a], vb = v[b];
            const double ta = static_cast<double>(ts[a]), tb = static_cast<double>(ts[b]);
            for (std::size_t i = a + 1; i < b; ++i) {
                const double w = (static_cast<double>(ts[i]) - ta) / (tb - ta);
                v[i] = va + w * (vb - va);
            }
        }
        out.add_column({c.name, c.group, c.unit, std::move(v)});
    }
    return out;
}

TimeSeriesFrame resample(const TimeSeriesFrame& frame, int step_minutes) {
    if (step_minutes <= 0) throw std::invalid_argument("resample: step must be positive");
    if (step_minutes % frame.step_minutes() != 0)
        throw std::invalid_argument("resample: step " + std::to_string(step_minutes) +
                                    " not a multiple of nominal step " +
                                    std::to_string(frame.step_minutes()));
    const std::size_t k = static_cast<std::size_t>(step_minutes / frame.step_minutes());
    if (k == 1) return frame;

    for (const auto& c : frame.columns())
        for (const double v : c.values)
            if (is_missing(v))
                throw std::invalid_argument("resample: column '" + c.name +
                                            "' has missing values");

    const std::size_t n_out = frame.rows() / k;
    std::vector<std::int64_t> ts(n_out);
    for (std::size_t i = 0; i < n_out; ++i) ts[i] = frame.timestamps()[i * k];

    TimeSeriesFrame out(std::move(ts), step_minutes);
    for (const auto& c : frame.columns()) {
        std::vector<double> v(n_out);
        if (c.is_categorical()) {
            for (std::size_t i = 0; i < n_out; ++i) v[i] = c.values[i * k + k - 1];
        } else {
            for (std::size_t i = 0; i < n_out; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < k; ++j) s += c.values[i * k + j];
                v[i] = s / static_cast<double>(k);
            }
        }
        out.add_column({c.name, c.group, c.unit, std::move(v)});
    }
    return out;
}

std::pair<TimeSeriesFrame, TimeSeriesFrame> split_train_test(const TimeSeriesFrame& frame,
                                                             std::int64_t boundary) {
    if (frame.rows() == 0) throw std::invalid_argument("split_train_test: empty frame");
    const auto& ts = frame.timestamps();
    if (boundary <= ts.front() || boundary > ts.back())
        throw std::invalid_argument("split_train_test: boundary outside covered range");
    const auto it = std::lower_bound(ts.begin(), ts.end(), boundary);
    const std::size_t cut = static_cast<std::size_t>(it - ts.begin());
    return {frame.slice_rows(0, cut), frame.slice_rows(cut, frame.rows())};
}

TimeSeriesFrame add_datetime_features(const TimeSeriesFrame& frame) {
    const auto& ts = frame.timestamps();
    std::vector<double> season(ts.size()), week(ts.size()), daytime(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const CivilTime c = from_epoch_seconds(ts[i]);
        // DJF winter, MAM spring, JJA summer, SON autumn
        if (c.month >= 3 && c.month <= 5) season[i] = 1;
        else if (c.month >= 6 && c.month <= 8) season[i] = 2;
        else if (c.month >= 9 && c.month <= 11) season[i] = 3;
        else season[i] = 0;
        week[i] = day_of_week(ts[i]) >= 5 ? 1 : 0;
        const int h = c.hour;
        daytime[i] = (h >= 6 && h < 12) ? 0 : (h >= 12 && h < 18) ? 1 : (h >= 18) ? 2 : 3;
    }
    TimeSeriesFrame out = frame;
    out.add_column({"season", FeatureGroup::Datetime, "enum", std::move(season)});
    out.add_column({"week", FeatureGroup::Datetime, "enum", std::move(week)});
    out.add_column({"daytime", FeatureGroup::Datetime, "enum", std::move(daytime)});
    return out;
}

}  // namespace hybridtherm
