#include "hybridtherm/hybrid/hybrid.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace hybridtherm {

std::string to_string(HybridStrategy s) {
    switch (s) {
        case HybridStrategy::Assistant: return "assistant";
        case HybridStrategy::Residual: return "residual";
        case HybridStrategy::Surrogate: return "surrogate";
        case HybridStrategy::Augmentation: return "augmentation";
    }
    return "?";
}

HybridStrategy strategy_from_string(const std::string& s) {
    if (s == "assistant") return HybridStrategy::Assistant;
    if (s == "residual") return HybridStrategy::Residual;
    if (s == "surrogate") return HybridStrategy::Surrogate;
    if (s == "augmentation") return HybridStrategy::Augmentation;
    throw std::invalid_argument("unknown strategy: '" + s +
                                "' (expected assistant|residual|surrogate|augmentation)");
}

namespace {

std::mutex g_cache_mutex;
std::map<std::pair<std::uint64_t, std::uint64_t>, TimeSeriesFrame> g_simulation_cache;

Eigen::MatrixXd to_matrix(const TimeSeriesFrame& frame, const std::vector<std::string>& columns) {
    Eigen::MatrixXd m(frame.rows(), columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto& v = frame.column(columns[j]).values;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (is_missing(v[i]))
                throw std::invalid_argument("hybrid: missing values in column '" + columns[j] +
                                            "' (interpolate first)");
            m(i, j) = v[i];
        }
    }
    return m;
}

}  // namespace

TimeSeriesFrame cached_simulation(const PhysicsTier& physics, const TimeSeriesFrame& frame) {
    const auto key = std::make_pair(physics.network.content_hash(), frame.content_hash());
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = g_simulation_cache.find(key);
        if (it != g_simulation_cache.end()) return it->second;
    }
    TimeSeriesFrame sim = simulate_tier(physics, frame);
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    if (g_simulation_cache.size() > 64) g_simulation_cache.clear();
    return g_simulation_cache.emplace(key, std::move(sim)).first->second;
}

void clear_simulation_cache() {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    g_simulation_cache.clear();
}

HybridModel hybrid_fit(HybridStrategy strategy, const LearnerConfig& learner_config,
                       const PhysicsTier& physics, const TimeSeriesFrame& train,
                       const ScenarioSpec& scenario) {
    if (physics.kind != scenario.physics_tier)
        throw std::invalid_argument("hybrid_fit: physics tier does not match the scenario");
    if (physics.needs_calibration)
        throw std::invalid_argument("hybrid_fit: CalibratedDetailed tier was not calibrated");

    HybridModel model;
    model.strategy = strategy;
    model.physics = physics;
    model.scenario = scenario.id;
    model.feature_columns = scenario_feature_columns(scenario, train);
    for (const auto& room : physics.rooms) {
        const std::string target = "temp_" + room;
        if (!train.has_column(target))
            throw std::invalid_argument("hybrid_fit: missing target column '" + target + "'");
        model.target_columns.push_back(target);
    }

    const TimeSeriesFrame sim = cached_simulation(physics, train);
    std::vector<std::string> sim_columns;
    for (const auto& room : physics.rooms) sim_columns.push_back("sim_" + room);

    // Standardize inputs only; residual targets must stay in degrees for the
    // additive recombination to be exact.
    std::vector<std::string> standardized = model.feature_columns;
    if (strategy == HybridStrategy::Assistant)
        standardized.insert(standardized.end(), sim_columns.begin(), sim_columns.end());
    TimeSeriesFrame design = train.select(model.feature_columns);
    if (strategy == HybridStrategy::Assistant) design = design.merged_with(sim);
    model.standardizer = Standardizer::fit(design, standardized);
    const TimeSeriesFrame design_std = model.standardizer.apply(design);

    const Eigen::MatrixXd x = to_matrix(design_std, standardized);
    const Eigen::MatrixXd y = to_matrix(train, model.target_columns);
    const Eigen::MatrixXd y_sim = to_matrix(sim, sim_columns);

    switch (strategy) {
        case HybridStrategy::Assistant:
            model.learner = Learner::fit(learner_config, x, y);
            break;
        case HybridStrategy::Residual:
            model.learner = Learner::fit(learner_config, x, y - y_sim);
            break;
        case HybridStrategy::Surrogate:
            model.learner = Learner::fit(learner_config, x, y_sim);
            break;
        case HybridStrategy::Augmentation:
            model.learner = Learner::fit(learner_config, x, y_sim).finetuned(x, y);
            break;
    }
    return model;
}

TimeSeriesFrame hybrid_predict(const HybridModel& model, const TimeSeriesFrame& frame) {
    const TimeSeriesFrame sim = cached_simulation(model.physics, frame);
    std::vector<std::string> sim_columns;
    for (const auto& room : model.physics.rooms) sim_columns.push_back("sim_" + room);

    TimeSeriesFrame design = frame.select(model.feature_columns);
    std::vector<std::string> feature_order = model.feature_columns;
    if (model.strategy == HybridStrategy::Assistant) {
        design = design.merged_with(sim);
        feature_order.insert(feature_order.end(), sim_columns.begin(), sim_columns.end());
    }
    const TimeSeriesFrame design_std = model.standardizer.apply(design);
    const Eigen::MatrixXd x = to_matrix(design_std, feature_order);

    Eigen::MatrixXd pred = model.learner.predict(x);
    if (model.strategy == HybridStrategy::Residual)
        pred += to_matrix(sim, sim_columns);

    TimeSeriesFrame out(frame.timestamps(), frame.step_minutes());
    for (std::size_t k = 0; k < model.target_columns.size(); ++k) {
        std::vector<double> v(frame.rows());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = pred(i, k);
        out.add_column({"pred_" + model.target_columns[k], FeatureGroup::Target, "degC",
                        std::move(v)});
    }
    return out;
}

TimeSeriesFrame physics_only_predict(const PhysicsTier& physics, const TimeSeriesFrame& frame) {
    const TimeSeriesFrame sim = cached_simulation(physics, frame);
    TimeSeriesFrame out(frame.timestamps(), frame.step_minutes());
    for (const auto& room : physics.rooms) {
        Column c = sim.column("sim_" + room);
        c.name = "pred_temp_" + room;
        c.group = FeatureGroup::Target;
        out.add_column(std::move(c));
    }
    return out;
}

}  // namespace hybridtherm
