#include "hybridtherm/eval/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hybridtherm/core/civil.hpp"
#include "hybridtherm/core/rng.hpp"
#include "hybridtherm/explain/exports.hpp"
#include "hybridtherm/explain/native.hpp"
#include "hybridtherm/physics/calibrate.hpp"
#include "hybridtherm/timeseries/ops.hpp"

namespace hybridtherm {

void ExperimentPlan::validate() const {
    if (scenarios.empty() || strategies.empty() || learners.empty() || seeds.empty())
        throw std::invalid_argument("ExperimentPlan: empty grid axis");
    if (resample_minutes <= 0)
        throw std::invalid_argument("ExperimentPlan: bad resample step");
    for (const int w : window_months)
        if (w < 1 || w > 12)
            throw std::invalid_argument("ExperimentPlan: window months must be in 1..12");
}

PreparedData prepare_dataset(const TimeSeriesFrame& raw, int resample_minutes,
                             std::int64_t boundary_epoch) {
    TimeSeriesFrame clean = interpolate_missing(raw);
    clean = resample(clean, resample_minutes);
    clean = add_datetime_features(clean);
    PreparedData out;
    out.boundary = boundary_epoch != 0
                       ? boundary_epoch
                       : clean.timestamps().back() + clean.step_minutes() * 60 -
                             365LL * 86400;  // last year tests
    auto [train, test] = split_train_test(clean, out.boundary);
    out.train = std::move(train);
    out.test = std::move(test);
    return out;
}

std::uint64_t cell_seed(std::uint64_t seed, const std::string& tag) {
    std::uint64_t h = CounterRng::fnv1a(tag);
    return CounterRng::mix(seed ^ h) | 1ull;  // nonzero so it always overrides
}

PureModel fit_pure(const LearnerConfig& config, const TimeSeriesFrame& train,
                   const ScenarioSpec& scenario) {
    PureModel model;
    model.feature_columns = scenario_feature_columns(scenario, train);
    for (const auto& c : train.columns())
        if (c.group == FeatureGroup::Target) model.target_columns.push_back(c.name);
    if (model.target_columns.empty())
        throw std::invalid_argument("fit_pure: no target columns");

    const TimeSeriesFrame design = train.select(model.feature_columns);
    model.standardizer = Standardizer::fit(design, model.feature_columns);
    const TimeSeriesFrame design_std = model.standardizer.apply(design);

    Eigen::MatrixXd x(train.rows(), model.feature_columns.size());
    for (std::size_t j = 0; j < model.feature_columns.size(); ++j) {
        const auto& v = design_std.column(model.feature_columns[j]).values;
        for (std::size_t i = 0; i < v.size(); ++i) x(i, j) = v[i];
    }
    Eigen::MatrixXd y(train.rows(), model.target_columns.size());
    for (std::size_t j = 0; j < model.target_columns.size(); ++j) {
        const auto& v = train.column(model.target_columns[j]).values;
        for (std::size_t i = 0; i < v.size(); ++i) y(i, j) = v[i];
    }
    model.learner = Learner::fit(config, x, y);
    return model;
}

TimeSeriesFrame pure_predict(const PureModel& model, const TimeSeriesFrame& frame) {
    const TimeSeriesFrame design_std = model.standardizer.apply(frame.select(model.feature_columns));
    Eigen::MatrixXd x(frame.rows(), model.feature_columns.size());
    for (std::size_t j = 0; j < model.feature_columns.size(); ++j) {
        const auto& v = design_std.column(model.feature_columns[j]).values;
        for (std::size_t i = 0; i < v.size(); ++i) x(i, j) = v[i];
    }
    const Eigen::MatrixXd pred = model.learner.predict(x);
    TimeSeriesFrame out(frame.timestamps(), frame.step_minutes());
    for (std::size_t k = 0; k < model.target_columns.size(); ++k) {
        std::vector<double> v(frame.rows());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = pred(i, k);
        out.add_column({"pred_" + model.target_columns[k], FeatureGroup::Target, "degC",
                        std::move(v)});
    }
    return out;
}

PhysicsTier prepare_tier(const ScenarioSpec& spec, const PreparedData& data,
                         std::uint64_t seed, int calibration_step_minutes) {
    PhysicsTier tier = make_tier(spec.physics_tier, schema_of(data.train),
                                 cell_seed(seed, "tier/" + to_string(spec.id)));
    if (!tier.needs_calibration) return tier;

    // Calibrate against the training targets on an hourly objective; the tier
    // still simulates at full resolution afterwards.
    TimeSeriesFrame coarse = data.train;
    if (calibration_step_minutes > data.train.step_minutes() &&
        calibration_step_minutes % data.train.step_minutes() == 0)
        coarse = resample(data.train, calibration_step_minutes);
    CalibrationOptions options;
    options.step_minutes = coarse.step_minutes();
    const CalibrationResult result = calibrate(tier.network, coarse, coarse, options);
    tier.network = result.network;
    tier.needs_calibration = false;
    return tier;
}

namespace {

LearnerConfig make_learner_config(const ExperimentPlan& plan, LearnerKind kind,
                                  std::uint64_t seed) {
    LearnerConfig config;
    config.kind = kind;
    config.ffnn = plan.ffnn;
    config.forest = plan.forest;
    config.finetune = plan.finetune;
    config.seed = seed;
    return config;
}

MetricReport tag(MetricReport r, const std::string& scenario, const std::string& strategy,
                 const std::string& learner, std::uint64_t seed, int window) {
    r.scenario = scenario;
    r.strategy = strategy;
    r.learner = learner;
    r.seed = seed;
    r.training_window_months = window;
    return r;
}

std::string format_row(const MetricReport& r) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%s,%s,%llu,%d,%.2f,%.4f,%.4f,%.4f",
                  r.scenario.c_str(), r.strategy.c_str(), r.learner.c_str(),
                  static_cast<unsigned long long>(r.seed), r.training_window_months,
                  100.0 * r.avg_mape_fraction, r.avg_mae_c, r.avg_rmse_c, r.pred_std_ratio);
    return buf;
}

struct Quartiles {
    double min, q1, median, q3, max, mean;
};

Quartiles quartiles_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    auto pick = [&](double q) {
        const double pos = q * static_cast<double>(v.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
        return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
    };
    Quartiles q{};
    q.min = v.front();
    q.q1 = pick(0.25);
    q.median = pick(0.5);
    q.q3 = pick(0.75);
    q.max = v.back();
    q.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    return q;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

std::int64_t add_months(std::int64_t epoch, int months) {
    CivilTime c = from_epoch_seconds(epoch);
    int m = c.month - 1 + months;
    int y = c.year + (m >= 0 ? m / 12 : (m - 11) / 12);
    m = ((m % 12) + 12) % 12;
    return to_epoch_seconds({y, m + 1, c.day, c.hour, c.minute, c.second});
}

}  // namespace

void write_metrics_csv(const std::vector<MetricReport>& reports, const std::string& path) {
    std::string out =
        "scenario,strategy,learner,seed,window_months,mape_pct,mae_c,rmse_c,pred_std_ratio\n";
    for (const auto& r : reports) out += format_row(r) + "\n";
    write_text(path, out);
}

std::vector<MetricReport> run_scenario_matrix(const ExperimentPlan& plan,
                                              const TimeSeriesFrame& data) {
    plan.validate();
    const PreparedData prepared =
        prepare_dataset(data, plan.resample_minutes, plan.boundary_epoch);

    std::vector<MetricReport> reports;
    for (const ScenarioId scenario_id : plan.scenarios) {
        const ScenarioSpec spec = scenario(scenario_id);
        const std::string sc = to_string(scenario_id);
        for (const std::uint64_t seed : plan.seeds) {
            const PhysicsTier tier =
                prepare_tier(spec, prepared, seed, plan.calibration_step_minutes);
            reports.push_back(tag(
                evaluate_predictions(prepared.test, physics_only_predict(tier, prepared.test)),
                sc, "physics", "-", seed, 12));
            for (const LearnerKind kind : plan.learners) {
                const std::string lk = to_string(kind);
                {
                    const auto cfg = make_learner_config(
                        plan, kind, cell_seed(seed, sc + "/datadriven/" + lk));
                    const PureModel pure = fit_pure(cfg, prepared.train, spec);
                    reports.push_back(
                        tag(evaluate_predictions(prepared.test, pure_predict(pure, prepared.test)),
                            sc, "datadriven", lk, seed, 12));
                }
                for (const HybridStrategy strategy : plan.strategies) {
                    const auto cfg = make_learner_config(
                        plan, kind,
                        cell_seed(seed, sc + "/" + to_string(strategy) + "/" + lk));
                    const HybridModel model =
                        hybrid_fit(strategy, cfg, tier, prepared.train, spec);
                    reports.push_back(
                        tag(evaluate_predictions(prepared.test,
                                                 hybrid_predict(model, prepared.test)),
                            sc, to_string(strategy), lk, seed, 12));
                }
            }
        }
    }

    if (!plan.out_dir.empty()) {
        std::filesystem::create_directories(plan.out_dir);
        write_metrics_csv(reports, plan.out_dir + "/metrics.csv");

        std::string box = "scenario,strategy,learner,seed,room,mape_pct\n";
        for (const auto& r : reports)
            for (std::size_t i = 0; i < r.rooms.size(); ++i) {
                char buf[160];
                std::snprintf(buf, sizeof(buf), "%s,%s,%s,%llu,%s,%.2f\n", r.scenario.c_str(),
                              r.strategy.c_str(), r.learner.c_str(),
                              static_cast<unsigned long long>(r.seed), r.rooms[i].c_str(),
                              100.0 * r.mape_fraction[i]);
                box += buf;
            }
        write_text(plan.out_dir + "/boxplot.csv", box);

        // Pooled per-room MAPE distribution per (scenario, strategy, learner).
        std::string summary = "scenario,strategy,learner,min,q1,median,q3,max,mean\n";
        std::vector<std::string> keys;
        for (const auto& r : reports) {
            const std::string key = r.scenario + "," + r.strategy + "," + r.learner;
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
        }
        for (const auto& key : keys) {
            std::vector<double> points;
            for (const auto& r : reports)
                if (r.scenario + "," + r.strategy + "," + r.learner == key)
                    for (const double m : r.mape_fraction) points.push_back(100.0 * m);
            const Quartiles q = quartiles_of(points);
            char buf[200];
            std::snprintf(buf, sizeof(buf), "%s,%.2f,%.2f,%.2f,%.2f,%.2f,%.2f\n", key.c_str(),
                          q.min, q.q1, q.median, q.q3, q.max, q.mean);
            summary += buf;
        }
        write_text(plan.out_dir + "/boxplot_summary.csv", summary);
    }
    return reports;
}

std::vector<MetricReport> run_data_quantity_sweep(const ExperimentPlan& plan,
                                                  const TimeSeriesFrame& data) {
    plan.validate();
    const PreparedData prepared =
        prepare_dataset(data, plan.resample_minutes, plan.boundary_epoch);

    std::vector<MetricReport> reports;
    for (const ScenarioId scenario_id : plan.scenarios) {
        const ScenarioSpec spec = scenario(scenario_id);
        const std::string sc = to_string(scenario_id);
        for (const std::uint64_t seed : plan.seeds) {
            // Calibration from the full window, kept for all shorter windows.
            const PhysicsTier tier =
                prepare_tier(spec, prepared, seed, plan.calibration_step_minutes);
            for (const int months : plan.window_months) {
                const std::int64_t window_start = add_months(prepared.boundary, -months);
                TimeSeriesFrame window_train = prepared.train;
                if (window_start > prepared.train.timestamps().front())
                    window_train = split_train_test(prepared.train, window_start).second;

                for (const LearnerKind kind : plan.learners) {
                    const std::string lk = to_string(kind);
                    {
                        const auto cfg = make_learner_config(
                            plan, kind,
                            cell_seed(seed, sc + "/sweep-datadriven/" + lk +
                                                "/" + std::to_string(months)));
                        const PureModel pure = fit_pure(cfg, window_train, spec);
                        reports.push_back(tag(evaluate_predictions(
                                                  prepared.test, pure_predict(pure, prepared.test)),
                                              sc, "datadriven", lk, seed, months));
                    }
                    for (const HybridStrategy strategy : plan.strategies) {
                        const auto cfg = make_learner_config(
                            plan, kind,
                            cell_seed(seed, sc + "/sweep-" + to_string(strategy) + "/" + lk +
                                                "/" + std::to_string(months)));
                        const HybridModel model =
                            hybrid_fit(strategy, cfg, tier, window_train, spec);
                        reports.push_back(
                            tag(evaluate_predictions(prepared.test,
                                                     hybrid_predict(model, prepared.test)),
                                sc, to_string(strategy), lk, seed, months));
                    }
                }
            }
        }
    }
    if (!plan.out_dir.empty()) {
        std::filesystem::create_directories(plan.out_dir);
        write_metrics_csv(reports, plan.out_dir + "/sweep.csv");
    }
    return reports;
}

namespace {

Eigen::MatrixXd frame_to_matrix(const TimeSeriesFrame& frame,
                                const std::vector<std::string>& columns) {
    Eigen::MatrixXd m(frame.rows(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto& v = frame.column(columns[j]).values;
        for (std::size_t i = 0; i < v.size(); ++i) m(i, j) = v[i];
    }
    return m;
}

std::vector<std::size_t> seeded_subsample(std::size_t population, std::size_t count,
                                          std::uint64_t seed, const std::string& tag) {
    std::vector<std::size_t> idx(population);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(cell_seed(seed, tag));
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::min(population, count));
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

std::vector<std::string> run_explain_study(const std::vector<HybridModel>& models,
                                           const PreparedData& data,
                                           const ExplainStudyOptions& options) {
    if (models.empty()) throw std::invalid_argument("run_explain_study: no fitted bundles");
    std::filesystem::create_directories(options.out_dir);
    std::vector<std::string> written;

    std::string rank_table = "learner,strategy,rank,native_feature,owen_feature,top5_overlap\n";

    for (const auto& model : models) {
        const std::string label = to_string(model.strategy) + "-" + to_string(model.learner.kind());
        const bool ar_clustering = model.strategy == HybridStrategy::Assistant ||
                                   model.strategy == HybridStrategy::Residual;

        // Attribution feature set: simulated inputs join for AR-clustering.
        std::vector<std::string> features = model.feature_columns;
        std::vector<std::string> sim_columns;
        for (const auto& room : model.physics.rooms) sim_columns.push_back("sim_" + room);
        if (ar_clustering)
            features.insert(features.end(), sim_columns.begin(), sim_columns.end());

        const TimeSeriesFrame train_sim = cached_simulation(model.physics, data.train);
        const TimeSeriesFrame test_sim = cached_simulation(model.physics, data.test);
        const TimeSeriesFrame train_full = data.train.select(model.feature_columns)
                                               .merged_with(train_sim);
        const TimeSeriesFrame test_full = data.test.select(model.feature_columns)
                                              .merged_with(test_sim);

        const Eigen::MatrixXd train_x = frame_to_matrix(train_full, features);
        const Eigen::MatrixXd test_x = frame_to_matrix(test_full, features);

        // Feature hierarchy from the training distribution.
        const DistanceMatrix dist = pearson_distance(train_x, features);
        const Dendrogram dendrogram = agglomerate(dist);
        const ClusterPartition partition =
            cut_partition(dendrogram, std::min(options.n_clusters, features.size()));

        const auto bg_rows = seeded_subsample(data.train.rows(), options.background_size,
                                              options.seed, "explain/background/" + label);
        const auto sample_rows = seeded_subsample(data.test.rows(), options.n_samples,
                                                  options.seed, "explain/samples/" + label);
        Eigen::MatrixXd background(bg_rows.size(), features.size());
        for (std::size_t i = 0; i < bg_rows.size(); ++i)
            background.row(i) = train_x.row(bg_rows[i]);
        Eigen::MatrixXd samples(sample_rows.size(), features.size());
        for (std::size_t i = 0; i < sample_rows.size(); ++i)
            samples.row(i) = test_x.row(sample_rows[i]);

        // The hybrid prediction as a row-wise function of the attribution
        // features (simulated values enter as exogenous inputs).
        const std::size_t n_base = model.feature_columns.size();
        const std::size_t n_rooms = model.physics.rooms.size();
        Eigen::RowVectorXd means = Eigen::RowVectorXd::Zero(features.size());
        Eigen::RowVectorXd inv_sd = Eigen::RowVectorXd::Ones(features.size());
        {
            const auto& fitted = model.standardizer.columns();
            for (std::size_t j = 0; j < features.size(); ++j) {
                if (std::find(fitted.begin(), fitted.end(), features[j]) == fitted.end())
                    continue;
                means[static_cast<Eigen::Index>(j)] = model.standardizer.mean_of(features[j]);
                inv_sd[static_cast<Eigen::Index>(j)] =
                    1.0 / model.standardizer.stddev_of(features[j]);
            }
        }
        const Eigen::Index learner_cols =
            model.strategy == HybridStrategy::Assistant
                ? static_cast<Eigen::Index>(n_base + n_rooms)
                : static_cast<Eigen::Index>(n_base);
        const HybridModel* hm = &model;
        PredictionFn fn = [hm, learner_cols, n_rooms, means, inv_sd](const Eigen::MatrixXd& x_raw) {
            const Eigen::MatrixXd x =
                (x_raw.rowwise() - means).array().rowwise() * inv_sd.array();
            Eigen::MatrixXd pred = hm->learner.predict(x.leftCols(learner_cols));
            if (hm->strategy == HybridStrategy::Residual)
                pred += x_raw.rightCols(static_cast<Eigen::Index>(n_rooms));
            return pred;
        };

        AttributionResult owen = owen_values_sampled(fn, samples, background, partition,
                                                     options.n_permutations, options.seed);
        owen.target_names = model.target_columns;

        // Exports per room plus shared dendrogram and groupbar documents.
        for (std::size_t k = 0; k < model.target_columns.size(); ++k) {
            ExportOptions eo;
            eo.target = k;
            const std::string path = options.out_dir + "/beeswarm_" + label + "_" +
                                     model.physics.rooms[k] + ".csv";
            write_text(path, export_plotdata(owen, PlotKind::Beeswarm, eo));
            written.push_back(path);
        }
        {
            ExportOptions eo;
            eo.target = 0;
            eo.feature = ar_clustering ? sim_columns.front() : "drybulb";
            eo.coloring_feature = "drybulb";
            const std::string path = options.out_dir + "/dependence_" + label + ".csv";
            write_text(path, export_plotdata(owen, PlotKind::Dependence, eo));
            written.push_back(path);

            ExportOptions ed;
            ed.dendrogram = &dendrogram;
            const std::string dpath = options.out_dir + "/dendrogram_" + label + ".json";
            write_text(dpath, export_plotdata(owen, PlotKind::Dendrogram, ed));
            written.push_back(dpath);

            const std::string gpath = options.out_dir + "/groupbar_" + label + ".csv";
            write_text(gpath, export_plotdata(owen, PlotKind::GroupBar, {}));
            written.push_back(gpath);
        }

        // Native-vs-Owen rank comparison on the learner's own feature view.
        {
            const std::vector<std::string>& learner_features =
                model.strategy == HybridStrategy::Assistant ? features : model.feature_columns;
            const Eigen::MatrixXd lx_raw = frame_to_matrix(test_full, learner_features);
            const TimeSeriesFrame lx_frame_std =
                model.standardizer.apply(test_full.select(learner_features));
            const Eigen::MatrixXd lx = frame_to_matrix(lx_frame_std, learner_features);

            const Eigen::MatrixXd native = native_importance(model.learner, lx);
            Eigen::VectorXd native_avg = native.rowwise().mean();

            Eigen::MatrixXd lx_samples(sample_rows.size(), lx.cols());
            for (std::size_t i = 0; i < sample_rows.size(); ++i)
                lx_samples.row(i) = lx.row(sample_rows[i]);
            Eigen::MatrixXd lx_bg(bg_rows.size(), lx.cols());
            const TimeSeriesFrame ltrain_std =
                model.standardizer.apply(train_full.select(learner_features));
            const Eigen::MatrixXd ltrain = frame_to_matrix(ltrain_std, learner_features);
            for (std::size_t i = 0; i < bg_rows.size(); ++i) lx_bg.row(i) = ltrain.row(bg_rows[i]);

            const Learner* learner = &model.learner;
            PredictionFn learner_fn = [learner](const Eigen::MatrixXd& x) {
                return learner->predict(x);
            };
            const ClusterPartition lp = singleton_partition(learner_features);
            AttributionResult lowen = owen_values_sampled(learner_fn, lx_samples, lx_bg, lp,
                                                          options.n_permutations, options.seed);
            Eigen::VectorXd owen_avg =
                Eigen::VectorXd::Zero(static_cast<Eigen::Index>(learner_features.size()));
            for (std::size_t k = 0; k < model.target_columns.size(); ++k) {
                Eigen::VectorXd per = Eigen::VectorXd::Zero(owen_avg.size());
                for (const auto& phi : lowen.phi) per += phi.col(k).cwiseAbs();
                owen_avg += per / static_cast<double>(lowen.phi.size());
            }
            owen_avg /= static_cast<double>(model.target_columns.size());

            const auto native_top = top_k_indices(native_avg, 5);
            const auto owen_top = top_k_indices(owen_avg, 5);
            const int overlap = rank_overlap(native_avg, owen_avg, 5);
            for (int r = 0; r < 5; ++r) {
                rank_table += to_string(model.learner.kind()) + "," + to_string(model.strategy) +
                              "," + std::to_string(r + 1) + "," +
                              learner_features[native_top[r]] + "," +
                              learner_features[owen_top[r]] + "," + std::to_string(overlap) +
                              "\n";
            }
        }
    }

    const std::string rank_path = options.out_dir + "/rank_table.csv";
    write_text(rank_path, rank_table);
    written.push_back(rank_path);
    return written;
}

}  // namespace hybridtherm
