#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hybridtherm/eval/metrics.hpp"
#include "hybridtherm/hybrid/hybrid.hpp"
#include "hybridtherm/learn/learner.hpp"
#include "hybridtherm/timeseries/scenario.hpp"

namespace hybridtherm {

/// Everything a reproducible experiment run needs: the grid, the seeds, the
/// preprocessing resolution, and the pinned learner hyperparameters.
struct ExperimentPlan {
    std::vector<ScenarioId> scenarios = {ScenarioId::W, ScenarioId::WB, ScenarioId::WBR};
    std::vector<HybridStrategy> strategies = {HybridStrategy::Assistant, HybridStrategy::Residual,
                                              HybridStrategy::Surrogate,
                                              HybridStrategy::Augmentation};
    std::vector<LearnerKind> learners = {LearnerKind::Linear, LearnerKind::Ffnn,
                                         LearnerKind::Forest};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::vector<int> window_months = {12, 6, 5, 4, 3, 2, 1};  // data-quantity sweep
    int resample_minutes = 15;
    std::int64_t boundary_epoch = 0;  // 0 = one year before the data end
    int calibration_step_minutes = 60;
    std::string out_dir;  // empty = no CSV output

    FfnnConfig ffnn;
    ForestConfig forest;
    FinetuneConfig finetune;

    void validate() const;
};

/// Interpolated, resampled, datetime-feature-augmented train/test split.
struct PreparedData {
    TimeSeriesFrame train;
    TimeSeriesFrame test;
    std::int64_t boundary = 0;
};

PreparedData prepare_dataset(const TimeSeriesFrame& raw, int resample_minutes,
                             std::int64_t boundary_epoch);

/// A fitted pure data-driven baseline (standardized scenario features -> Y).
struct PureModel {
    Learner learner;
    Standardizer standardizer;
    std::vector<std::string> feature_columns;
    std::vector<std::string> target_columns;
};

PureModel fit_pure(const LearnerConfig& config, const TimeSeriesFrame& train,
                   const ScenarioSpec& scenario);
TimeSeriesFrame pure_predict(const PureModel& model, const TimeSeriesFrame& frame);

/// Deterministic per-cell seed derivation.
std::uint64_t cell_seed(std::uint64_t seed, const std::string& tag);

/// Builds the tier for a scenario and calibrates it when the tier requires it
/// (hourly objective resolution by default).
PhysicsTier prepare_tier(const ScenarioSpec& spec, const PreparedData& data,
                         std::uint64_t seed, int calibration_step_minutes);

/// Runs every (scenario, strategy, learner, seed) cell plus the physics-only
/// and pure data-driven baselines; evaluates on the test period. When
/// plan.out_dir is set, writes metrics.csv, boxplot.csv and boxplot_summary.csv
/// (byte-stable across reruns).
std::vector<MetricReport> run_scenario_matrix(const ExperimentPlan& plan,
                                              const TimeSeriesFrame& data);

/// Refits the learners on progressively shorter trailing training windows
/// (physics calibration kept from the full window) against the fixed test
/// period; writes sweep.csv when out_dir is set.
std::vector<MetricReport> run_data_quantity_sweep(const ExperimentPlan& plan,
                                                  const TimeSeriesFrame& data);

struct ExplainStudyOptions {
    int n_samples = 500;        // seeded subsample of test rows to explain
    int n_permutations = 64;    // sampled Owen estimator
    int background_size = 200;  // seeded subsample of training rows
    std::size_t n_clusters = 5;
    std::uint64_t seed = 7;
    std::string out_dir;
};

/// Explainability drivers for a set of fitted hybrid models: Pearson-distance
/// clustering (AR-clustering with simulated inputs for assistant/residual,
/// DAS-clustering without them otherwise), sampled Owen values, beeswarm /
/// dependence / dendrogram / groupbar exports, and the top-5 native-vs-Owen
/// rank table per learner. Returns the written file paths.
std::vector<std::string> run_explain_study(const std::vector<HybridModel>& models,
                                           const PreparedData& data,
                                           const ExplainStudyOptions& options);

void write_metrics_csv(const std::vector<MetricReport>& reports, const std::string& path);

}  // namespace hybridtherm
