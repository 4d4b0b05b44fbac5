#pragma once

#include <string>
#include <vector>

#include "hybridtherm/learn/learner.hpp"
#include "hybridtherm/physics/tier.hpp"
#include "hybridtherm/timeseries/scenario.hpp"
#include "hybridtherm/timeseries/standardizer.hpp"

namespace hybridtherm {

/// The four ways of binding the physics simulation to a data-driven learner.
enum class HybridStrategy { Assistant, Residual, Surrogate, Augmentation };

std::string to_string(HybridStrategy s);
HybridStrategy strategy_from_string(const std::string& s);

/// A fitted physics + learner combination.
///
///   Assistant:    learner fit on [X | Y_sim] -> Y,   predict g([x, y_sim])
///   Residual:     learner fit on X -> (Y - Y_sim),   predict y_sim + g(x)
///   Surrogate:    learner fit on X -> Y_sim,         predict g(x)
///   Augmentation: surrogate fit, then fine-tuned on X -> Y, predict g(x)
///
/// X is restricted to the scenario-allowed feature groups and standardized
/// (simulated inputs included for Assistant); targets stay in degrees Celsius.
struct HybridModel {
    HybridStrategy strategy = HybridStrategy::Residual;
    Learner learner;
    PhysicsTier physics;
    Standardizer standardizer;
    std::vector<std::string> feature_columns;  // base features, scenario order
    std::vector<std::string> target_columns;   // "temp_<room>", fixed order
    ScenarioId scenario = ScenarioId::WBR;
};

/// Fits the given strategy. The physics simulation over the training drivers
/// is computed once (cached by network and frame hash) and shared. Throws on
/// missing targets or a scenario/tier mismatch.
HybridModel hybrid_fit(HybridStrategy strategy, const LearnerConfig& learner_config,
                       const PhysicsTier& physics, const TimeSeriesFrame& train,
                       const ScenarioSpec& scenario);

/// Predicts one output column per room ("pred_temp_<room>") at the frame's
/// resolution.
TimeSeriesFrame hybrid_predict(const HybridModel& model, const TimeSeriesFrame& frame);

/// Physics-only baseline: simulation columns renamed to prediction columns.
TimeSeriesFrame physics_only_predict(const PhysicsTier& physics, const TimeSeriesFrame& frame);

/// Cached tier simulation keyed by (network hash, frame hash); physics runs
/// dominate experiment cost, so rerunning a tier over the same frame is free.
TimeSeriesFrame cached_simulation(const PhysicsTier& physics, const TimeSeriesFrame& frame);
void clear_simulation_cache();

}  // namespace hybridtherm
