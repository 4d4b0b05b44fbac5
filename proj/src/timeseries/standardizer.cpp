#include "hybridtherm/timeseries/standardizer.hpp"

#include <cmath>
#include <stdexcept>

namespace hybridtherm {

Standardizer Standardizer::fit(const TimeSeriesFrame& frame,
                               const std::vector<std::string>& columns) {
    if (frame.rows() == 0) throw std::invalid_argument("Standardizer::fit: empty frame");
    Standardizer s;
    for (const auto& name : columns) {
        const auto& col = frame.column(name);  // throws on unknown column
        double mean = 0.0;
        for (const double v : col.values) {
            if (is_missing(v))
                throw std::invalid_argument("Standardizer::fit: missing values in '" + name + "'");
            mean += v;
        }
        mean /= static_cast<double>(col.values.size());
        double var = 0.0;
        for (const double v : col.values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(col.values.size());
        double sd = std::sqrt(var);
        if (sd <= 0.0) sd = 1.0;  // constant column
        s.columns_.push_back(name);
        s.means_.push_back(mean);
        s.stddevs_.push_back(sd);
    }
    return s;
}

TimeSeriesFrame Standardizer::apply(const TimeSeriesFrame& frame) const {
    TimeSeriesFrame out(frame.timestamps(), frame.step_minutes());
    for (const auto& c : frame.columns()) {
        Column nc = c;
        for (std::size_t k = 0; k < columns_.size(); ++k) {
            if (columns_[k] != c.name) continue;
            for (auto& v : nc.values) v = (v - means_[k]) / stddevs_[k];
            break;
        }
        out.add_column(std::move(nc));
    }
    return out;
}

TimeSeriesFrame Standardizer::invert(const TimeSeriesFrame& frame) const {
    TimeSeriesFrame out(frame.timestamps(), frame.step_minutes());
    for (const auto& c : frame.columns()) {
        Column nc = c;
        for (std::size_t k = 0; k < columns_.size(); ++k) {
            if (columns_[k] != c.name) continue;
            for (auto& v : nc.values) v = v * stddevs_[k] + means_[k];
            break;
        }
        out.add_column(std::move(nc));
    }
    return out;
}

double Standardizer::mean_of(const std::string& column) const {
    for (std::size_t k = 0; k < columns_.size(); ++k)
        if (columns_[k] == column) return means_[k];
    throw std::out_of_range("Standardizer: column not fitted: '" + column + "'");
}

double Standardizer::stddev_of(const std::string& column) const {
    for (std::size_t k = 0; k < columns_.size(); ++k)
        if (columns_[k] == column) return stddevs_[k];
    throw std::out_of_range("Standardizer: column not fitted: '" + column + "'");
}

}  // namespace hybridtherm
