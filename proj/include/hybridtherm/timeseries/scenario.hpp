#pragma once

#include <set>
#include <string>
#include <vector>

#include "hybridtherm/timeseries/frame.hpp"

namespace hybridtherm {

/// Physics fidelity matched to each documentation/sensor level.
enum class PhysicsTierKind { Archetype, UncalibratedDetailed, CalibratedDetailed };

enum class ScenarioId { W, WB, WBR };

/// Documentation/sensor scenario: which feature groups the models may use,
/// paired with the fixed physics fidelity of that level.
struct ScenarioSpec {
    ScenarioId id;
    std::set<FeatureGroup> allowed_groups;
    PhysicsTierKind physics_tier;
};

ScenarioSpec scenario(ScenarioId id);
ScenarioSpec scenario_from_string(const std::string& s);  // "w" | "wb" | "wbr"

std::string to_string(ScenarioId id);
std::string to_string(PhysicsTierKind tier);

/// Feature columns the scenario permits, in frame order. Simulated and Target
/// columns are never part of the base feature set.
std::vector<std::string> scenario_feature_columns(const ScenarioSpec& scenario,
                                                  const TimeSeriesFrame& frame);

}  // namespace hybridtherm
