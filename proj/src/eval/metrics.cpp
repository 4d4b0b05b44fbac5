#include "hybridtherm/eval/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "hybridtherm/core/civil.hpp"

namespace hybridtherm {

namespace {

void check_lengths(std::span<const double> y, std::span<const double> y_hat) {
    if (y.size() != y_hat.size()) throw std::invalid_argument("metric: length mismatch");
    if (y.empty()) throw std::invalid_argument("metric: empty input");
}

}  // namespace

double mae(std::span<const double> y, std::span<const double> y_hat) {
    check_lengths(y, y_hat);
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) sum += std::abs(y[i] - y_hat[i]);
    return sum / static_cast<double>(y.size());
}

double mape(std::span<const double> y, std::span<const double> y_hat) {
    check_lengths(y, y_hat);
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (std::abs(y[i]) < 0.5)
            throw std::invalid_argument("mape: |y| below the 0.5 degC guard");
        sum += std::abs((y[i] - y_hat[i]) / y[i]);
    }
    return sum / static_cast<double>(y.size());
}

double rmse(std::span<const double> y, std::span<const double> y_hat) {
    check_lengths(y, y_hat);
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) sum += (y[i] - y_hat[i]) * (y[i] - y_hat[i]);
    return std::sqrt(sum / static_cast<double>(y.size()));
}

MetricReport evaluate_predictions(const TimeSeriesFrame& truth,
                                  const TimeSeriesFrame& predictions) {
    if (truth.timestamps() != predictions.timestamps())
        throw std::invalid_argument("evaluate_predictions: timestamp mismatch");
    MetricReport report;
    auto stddev = [](const std::vector<double>& v) {
        double mean = 0.0;
        for (const double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (const double x : v) var += (x - mean) * (x - mean);
        return std::sqrt(var / static_cast<double>(v.size()));
    };
    for (const auto& c : truth.columns()) {
        if (c.group != FeatureGroup::Target || c.name.rfind("temp_", 0) != 0) continue;
        const auto& pred = predictions.column("pred_" + c.name).values;
        report.rooms.push_back(c.name.substr(5));
        report.mae_c.push_back(mae(c.values, pred));
        report.mape_fraction.push_back(mape(c.values, pred));
        report.rmse_c.push_back(rmse(c.values, pred));
        const double truth_sd = stddev(c.values);
        report.pred_std_ratio += truth_sd > 0.0 ? stddev(pred) / truth_sd : 0.0;
    }
    if (report.rooms.empty())
        throw std::invalid_argument("evaluate_predictions: no target columns");
    const double n = static_cast<double>(report.rooms.size());
    report.pred_std_ratio /= n;
    for (std::size_t r = 0; r < report.rooms.size(); ++r) {
        report.avg_mae_c += report.mae_c[r] / n;
        report.avg_mape_fraction += report.mape_fraction[r] / n;
        report.avg_rmse_c += report.rmse_c[r] / n;
    }
    return report;
}

std::vector<MonthlyEntry> monthly_breakdown(const TimeSeriesFrame& truth,
                                            const TimeSeriesFrame& predictions) {
    if (truth.timestamps() != predictions.timestamps())
        throw std::invalid_argument("monthly_breakdown: timestamp mismatch");

    // Bucket row ranges by calendar month (timestamps are sorted).
    struct Bucket { int year, month; std::size_t begin, end; };
    std::vector<Bucket> buckets;
    const auto& ts = truth.timestamps();
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const CivilTime c = from_epoch_seconds(ts[i]);
        if (buckets.empty() || buckets.back().year != c.year || buckets.back().month != c.month)
            buckets.push_back({c.year, c.month, i, i + 1});
        else
            buckets.back().end = i + 1;
    }

    std::vector<MonthlyEntry> out;
    for (const auto& b : buckets) {
        const TimeSeriesFrame t = truth.slice_rows(b.begin, b.end);
        const TimeSeriesFrame p = predictions.slice_rows(b.begin, b.end);
        const MetricReport r = evaluate_predictions(t, p);
        MonthlyEntry e;
        e.year = b.year;
        e.month = b.month;
        e.mae_c = r.avg_mae_c;
        e.mape_fraction = r.avg_mape_fraction;
        e.rmse_c = r.avg_rmse_c;
        e.n_rows = b.end - b.begin;
        out.push_back(e);
    }
    return out;
}

}  // namespace hybridtherm
